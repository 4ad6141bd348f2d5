#include "ebb/transfer.hpp"

#include <cmath>
#include <string>

#include "ebb/errors.hpp"

namespace ebb {

ScaledMatrix2 ScaledMatrix2::from(const Mat2& m) {
    ScaledMatrix2 t;
    t.apply_left(m);
    return t;
}

Mat2 ScaledMatrix2::normalized() const {
    const double r22 = sign * std::exp(log_det - 2.0 * rho);
    return {c, c * n - s * r22, s, s * n + c * r22};
}

double ScaledMatrix2::determinant() const { return (c * c + s * s) * sign * std::exp(log_det); }

void ScaledMatrix2::apply_left(const Mat2& f) {
    // QR of f Q: first column f q, then the triangular update R' R.
    const double pc = f.a * c + f.b * s;
    const double ps = f.c * c + f.d * s;
    const double r = std::hypot(pc, ps);
    const double det = f.det();
    if (r == 0.0 || det == 0.0 || !std::isfinite(r)) throw NumericalError("transfer factor is singular or not finite");
    const double qc = pc / r;
    const double qs = ps / r;
    // component of f q_perp along the new q
    const double r12 = qc * (f.b * c - f.a * s) + qs * (f.d * c - f.c * s);
    n += r12 / r * sign * std::exp(log_det - 2.0 * rho);
    c = qc;
    s = qs;
    rho += std::log(r);
    log_det += std::log(std::abs(det));
    if (det < 0.0) sign = -sign;
}

double log_spectral_norm(const ScaledMatrix2& t) {
    return t.rho + std::log(t.normalized().spectral_norm());
}

Mat2 one_step(double v, Energy e) { return {v - e, -1.0, 1.0, 0.0}; }

TransferProduct product(const PotentialValues& pot, Energy e, int length, std::span<const int> checkpoints) {
    if (length < 0) throw InputError("transfer product needs L >= 0");
    if (pot.size() < static_cast<std::size_t>(length) + 1)
        throw InputError("potential has " + std::to_string(pot.size()) + " entries, transfer product to L=" +
                         std::to_string(length) + " needs " + std::to_string(length + 1));
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 0 || checkpoints[i] > length)
            throw InputError("checkpoint " + std::to_string(checkpoints[i]) + " outside [0, L]");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw InputError("checkpoints must be strictly increasing");
    }

    TransferProduct out;
    out.trace.entries.reserve(checkpoints.size());
    std::size_t next = 0;
    for (int x = 0; x <= length; ++x) {
        out.matrix.apply_left(one_step(pot[static_cast<std::size_t>(x)], e));
        if (next < checkpoints.size() && checkpoints[next] == x) {
            out.trace.entries.push_back({x, std::max(0.0, log_spectral_norm(out.matrix)), out.matrix});
            ++next;
        }
    }
    return out;
}

} // namespace ebb
