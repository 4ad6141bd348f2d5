#pragma once

#include <vector>

namespace ebb {

// Energies are dimensionless, in units of the sample hopping.
using Energy = double;

struct ThermoParams {
    double beta_l = 1.0;
    double beta_r = 1.0;
    double mu_l = 0.0;
    double mu_r = 0.0;

    bool is_equilibrium() const { return beta_l == beta_r && mu_l == mu_r; }

    // Throws InputError naming the offending field.
    void validate() const;
};

/// Reduced energy xi(E) = beta (E - mu).
double xi(Energy e, double beta, double mu);

/// Fermi-Dirac occupation 1 / (1 + exp(beta (E - mu))).
///
/// Evaluated as exp(-x) / (1 + exp(-x)) for x > 0 so that neither branch
/// can overflow; deep in the tail the result underflows gracefully to a
/// subnormal or zero.
double fermi_density(Energy e, double beta, double mu);

} // namespace ebb
