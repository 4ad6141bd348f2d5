#pragma once

#include <span>
#include <string>
#include <vector>

#include "ebb/fluxes.hpp"
#include "ebb/leads.hpp"
#include "ebb/model.hpp"
#include "ebb/potentials.hpp"

namespace ebb {

struct LSweepPoint {
    int length = 0;
    double sigma_density = 0.0;
    // log of sigma_density computed from log|G_lr|, so it stays finite after
    // sigma_density itself underflows at large L.
    double log_sigma_density = 0.0;
    double transmission = 0.0;
    double log_transfer_norm = 0.0;
    bool resonance_flag = false;
    double unitarity_residual = 0.0;
};

// sigma_L(E) and log ||T_L(E)|| at each checkpoint. The potential is
// generated once at the largest checkpoint; the transfer product runs in a
// single pass; sigma comes from an independent direct solve per checkpoint.
// Throws DomainError when E is outside the band intersection.
std::vector<LSweepPoint> l_sweep(const PotentialSpec& spec, Energy e, const LeadModel& lead_l,
                                 const LeadModel& lead_r, const ThermoParams& thermo,
                                 std::span<const int> checkpoints, int threads = 1);

struct EnergyRecord {
    Energy energy = 0.0;
    bool ok = false;
    std::string error; // set when !ok
    double transmission = 0.0;
    SpectralDensities densities;
    double unitarity_residual = 0.0;
};

// Full pipeline per grid point. Numerical failures are recorded per point.
std::vector<EnergyRecord> energy_sweep(const PotentialSpec& spec, int length, const LeadModel& lead_l,
                                       const LeadModel& lead_r, const ThermoParams& thermo,
                                       std::span<const Energy> grid, int threads = 1);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares. r2 is 1 when y has no variance.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct ClassificationThresholds {
    // sigma vanishes: slope(log sigma vs L) < -sigma_slope / L_max with R^2 > sigma_min_r2
    double sigma_slope = 10.0;
    double sigma_min_r2 = 0.8;
    // sigma persists: min sigma > persistent_ratio * median sigma
    double persistent_ratio = 0.5;
    // norms bounded: slope(log ||T|| vs L) < bounded_norm_slope / L_max
    double bounded_norm_slope = 1.0;
    // norms diverge: slope(log ||T|| vs L) > diverging_norm_slope / L_max with R^2 > diverging_min_r2
    double diverging_norm_slope = 10.0;
    double diverging_min_r2 = 0.8;
    std::size_t min_checkpoints = 8;
    double min_span_ratio = 10.0;
};

enum class TransportLabel { persistent, vanishing, indeterminate };

std::string to_string(TransportLabel label);

struct TransportClassification {
    TransportLabel label = TransportLabel::indeterminate;
    LinearFit norm_fit;  // log ||T_L|| against L
    LinearFit sigma_fit; // log sigma_L against L
    double min_over_median = 0.0;
    int max_length = 0;

    bool sigma_vanishing = false;
    bool sigma_persistent = false;
    bool norm_bounded = false;
    bool norm_diverging = false;

    // sigma -> 0 with bounded norms, or sigma persisting with diverging norms.
    bool contradiction() const {
        return (sigma_vanishing && norm_bounded) || (sigma_persistent && norm_diverging);
    }
};

// Requires >= min_checkpoints points spanning a factor min_span_ratio in L.
TransportClassification classify_transport(std::span<const LSweepPoint> sweep,
                                           const ClassificationThresholds& thresholds = {});

struct EquivalenceRow {
    Energy energy = 0.0;
    TransportClassification classification;
    double sigma_at_max_length = 0.0;
};

struct EquivalenceReport {
    std::vector<EquivalenceRow> rows;
    int max_length = 0;
    std::size_t persistent = 0;
    std::size_t vanishing = 0;
    std::size_t indeterminate = 0;
    std::size_t contradictions = 0;
    // Grid averages of sigma_{L_max} over each class; 0 for an empty class.
    double mean_sigma_persistent = 0.0;
    double mean_sigma_vanishing = 0.0;
    double max_unitarity_residual = 0.0;
};

EquivalenceReport equivalence_report(const PotentialSpec& spec, const LeadModel& lead_l, const LeadModel& lead_r,
                                     const ThermoParams& thermo, std::span<const Energy> grid,
                                     std::span<const int> checkpoints,
                                     const ClassificationThresholds& thresholds = {}, int threads = 1);

// `count` distinct integers from lo to hi, roughly geometrically spaced.
std::vector<int> geometric_checkpoints(int lo, int hi, int count);

// lo, lo + step, ... up to hi.
std::vector<int> arithmetic_checkpoints(int lo, int hi, int step);

// `count` points evenly spaced on the closed interval [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int count);

// Sanity envelope sigma <= 4 T max(beta) (|E| + |mu_l| + |mu_r| + 2 / min(beta)).
double sigma_envelope(Energy e, double transmission, const ThermoParams& thermo);

} // namespace ebb
