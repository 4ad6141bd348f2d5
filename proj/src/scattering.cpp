#include "ebb/scattering.hpp"

#include <cmath>
#include <string>

#include "ebb/errors.hpp"

namespace ebb {

TMatrix t_matrix(const GreenMatrix2& g, const SelfEnergyPair& se) {
    const double im_l = se.left.imag();
    const double im_r = se.right.imag();
    if (im_l < 0.0 || im_r < 0.0) throw InputError("t_matrix: Im F must be >= 0");
    const double sl = std::sqrt(im_l);
    const double sr = std::sqrt(im_r);
    const Complex two_i{0.0, 2.0};
    return {two_i * sl * g.ll * sl, two_i * sl * g.lr * sr, two_i * sr * g.rl * sl, two_i * sr * g.rr * sr};
}

double unitarity_residual(const TMatrix& t) {
    return (t.adjoint() * t + t + t.adjoint()).spectral_norm();
}

double transmission(const TMatrix& t) {
    const double p = std::norm(t.lr);
    if (!std::isfinite(p) || p > 1.0 + kTransmissionOvershoot)
        throw UnitarityError("transmission probability " + std::to_string(p) + " exceeds 1");
    return std::min(p, 1.0);
}

} // namespace ebb
