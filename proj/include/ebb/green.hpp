#pragma once

#include "ebb/leads.hpp"
#include "ebb/matrix2.hpp"
#include "ebb/model.hpp"
#include "ebb/potentials.hpp"
#include "ebb/transfer.hpp"

namespace ebb {

// Boundary block <psi_a, (H - z)^{-1} psi_b> with l the site 0 and r the
// site L.
using GreenMatrix2 = CMat2;

struct SelfEnergyPair {
    WeissValue left;
    WeissValue right;

    CMat2 as_matrix() const { return CMat2::diagonal(left, right); }
};

SelfEnergyPair self_energies(const LeadModel& left, const LeadModel& right, Energy e);

// Solver output together with the 1-norm condition estimate of the
// tridiagonal system that produced it.
struct DirectGreen {
    GreenMatrix2 green;
    double condition = 0.0;
    // log|G_lr|. Every off-diagonal of the sample operator is -1, which makes
    // G_lr = 1/det(H) exactly; taking it from the LU pivots keeps it finite
    // when G_lr itself underflows (large L, strong localization).
    double log_abs_g_lr = 0.0;
};

inline constexpr double kMaxCondition = 1e12;

// Decoupled boundary Green matrix from T_L(E) = [[a, b], [c, d]]:
// g_ll = -b/a, g_lr = g_rl = 1/a, g_rr = c/a. Throws ResonanceError when
// |a| < 1e-12 ||T|| (E numerically a Dirichlet eigenvalue).
GreenMatrix2 sample_green_via_transfer(const ScaledMatrix2& t);

// Independent route: pivoted LU of (h_{S,L} - E) with right-hand sides
// delta_0 and delta_L. Neither throws on ill conditioning; the *_direct
// wrappers below do.
DirectGreen solve_sample_green(const PotentialValues& pot, Energy e, int length);
GreenMatrix2 sample_green_direct(const PotentialValues& pot, Energy e, int length);

// Couples G0 to the leads: G = (I - G0 F)^{-1} G0.
GreenMatrix2 coupled_green(const GreenMatrix2& g0, const SelfEnergyPair& se);

// Complex solve of (h_{S,L} - E - F_l P_0 - F_r P_L) u = delta_a. Requires
// Im F_l > 0 or Im F_r > 0.
DirectGreen solve_coupled_green(const PotentialValues& pot, Energy e, int length, const SelfEnergyPair& se);
GreenMatrix2 coupled_green_direct(const PotentialValues& pot, Energy e, int length, const SelfEnergyPair& se);

// max over (x, y) in {(1,0), (0,1)} of
//   || T (u, x + F_l u) - (y + F_r v, v) || / ||T||,  (u, v) = G (x, y),
// evaluated without forming exp(log_scale). Zero when G and T are related
// as the coupled Green matrix and transfer matrix of the same sample.
double graph_map_residual(const GreenMatrix2& g, const ScaledMatrix2& t, const SelfEnergyPair& se);

struct GraphCheck {
    double residual = 0.0;
    bool passed = false;
};

GraphCheck graph_map_check(const GreenMatrix2& g, const ScaledMatrix2& t, const SelfEnergyPair& se, double tol);

} // namespace ebb
