#pragma once

#include "ebb/green.hpp"
#include "ebb/leads.hpp"
#include "ebb/model.hpp"
#include "ebb/potentials.hpp"
#include "ebb/quadrature.hpp"
#include "ebb/scattering.hpp"

namespace ebb {

// Pointwise-in-energy steady-state densities. Right densities are the
// negated left ones, so conservation holds exactly.
struct SpectralDensities {
    double phi_l = 0.0; // energy current
    double phi_r = 0.0;
    double j_l = 0.0;   // charge current
    double j_r = 0.0;
    double sigma = 0.0; // entropy production, >= 0
};

// phi = T (rho_l - rho_r) E, j = T (rho_l - rho_r),
// sigma = T (xi_r - xi_l)(rho_l - rho_r).
SpectralDensities spectral_densities(Energy e, double transmission, const ThermoParams& thermo);

// -beta_l (phi_l - mu_l j_l) - beta_r (phi_r - mu_r j_r): the entropy density
// from the fluxes, which must match `sigma`.
double entropy_from_fluxes(const SpectralDensities& d, const ThermoParams& thermo);

struct SystemConfig {
    SampleSpec sample;
    LeadModel lead_l;
    LeadModel lead_r;
    ThermoParams thermo;
    QuadratureOptions quadrature;

    void validate() const;
};

// One pass of the full pipeline at energy E:
// leads -> coupled Green (direct solve) -> t -> transmission -> densities.
// When neither lead has an open channel at E the solve is skipped: t = 0,
// transmission 0, and `green` is NaN.
struct PointEvaluation {
    Energy energy = 0.0;
    SelfEnergyPair self_energy;
    GreenMatrix2 green;
    TMatrix t;
    double transmission = 0.0;
    // log of the transmission via log|G_lr|; finite where `transmission`
    // underflows to 0. -inf when a lead channel is closed.
    double log_transmission = 0.0;
    double unitarity_residual = 0.0;
    SpectralDensities densities;
};

PointEvaluation evaluate_point(const PotentialValues& pot, int length, const LeadModel& lead_l,
                               const LeadModel& lead_r, const ThermoParams& thermo, Energy e);

struct FluxResult {
    double energy_flux_l = 0.0;
    double energy_flux_r = 0.0;
    double charge_flux_l = 0.0;
    double charge_flux_r = 0.0;
    double entropy_flux = 0.0;
    // Largest of the three per-density estimates, with the 1/2pi included.
    double quadrature_error_estimate = 0.0;
    long evaluations = 0;
    std::size_t panels = 0;
    bool converged = true;
    bool no_open_channel = false;
    double max_unitarity_residual = 0.0;
    double min_sigma_density = 0.0;
};

// Adaptive integration of phi_l, j_l and sigma over the band intersection
// (minus edge margins), times 1/2pi. Initial panels are no wider than
// pi/(L+1) so every transmission resonance is seen.
FluxResult integrate_fluxes(const SystemConfig& config, int threads = 1);

} // namespace ebb
