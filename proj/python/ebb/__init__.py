"""Two-terminal transport through a one-dimensional tight-binding sample.

Configs are plain dicts with the same schema as the command-line tool's
JSON files (sections sample, lead_l, lead_r, thermo, quadrature, sweep).
"""

from ._ebb import (
    DomainError,
    InputError,
    NumericalError,
    __version__,
    equivalence,
    evaluate,
    fermi_density,
    fluxes,
    generate_potential,
    resolve_config,
    run,
    sweep_e,
    sweep_l,
    transfer_product,
    validate,
    weiss,
)

__all__ = [
    "DomainError",
    "InputError",
    "NumericalError",
    "__version__",
    "equivalence",
    "evaluate",
    "fermi_density",
    "fluxes",
    "generate_potential",
    "resolve_config",
    "run",
    "sweep_e",
    "sweep_l",
    "transfer_product",
    "validate",
    "weiss",
]
