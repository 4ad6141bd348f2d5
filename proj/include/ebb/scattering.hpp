#pragma once

#include "ebb/green.hpp"
#include "ebb/matrix2.hpp"

namespace ebb {

// On-shell t-matrix; the scattering matrix is s = 1 + t.
using TMatrix = CMat2;

// t_ab = 2i sqrt(Im F_a) G_ab sqrt(Im F_b). A lead with Im F = 0 gets a
// structurally zero row and column.
TMatrix t_matrix(const GreenMatrix2& g, const SelfEnergyPair& se);

inline CMat2 s_matrix(const TMatrix& t) { return CMat2::identity() + t; }

// Spectral norm of t* t + t + t*; zero iff s is unitary.
double unitarity_residual(const TMatrix& t);

inline constexpr double kTransmissionOvershoot = 1e-10;

// |t_lr|^2. Overshoot above 1 up to 1e-10 is clamped; anything larger
// throws UnitarityError.
double transmission(const TMatrix& t);

} // namespace ebb
