#pragma once

#include <span>
#include <vector>

#include "ebb/matrix2.hpp"
#include "ebb/model.hpp"
#include "ebb/potentials.hpp"

namespace ebb {

// A 2x2 product kept as
//   T = Q [[e^rho, e^rho n], [0, sign e^(log_det - rho)]],   Q = [[c, -s], [s, c]],
// i.e. a rotation times an upper-triangular factor whose diagonal lives in
// log form. ||T|| ~ exp(gamma L) never overflows, and the small singular
// direction is not lost to cancellation, so det T = sign exp(log_det) holds
// at any L (log_det is exactly 0 for products of one-step matrices).
struct ScaledMatrix2 {
    double c = 1.0;
    double s = 0.0;
    double rho = 0.0;     // log ||T e_1||
    double n = 0.0;
    double log_det = 0.0; // log |det T|
    double sign = 1.0;    // sign of det T

    static ScaledMatrix2 from(const Mat2& m);

    double log_scale() const { return rho; }
    // T exp(-rho)
    Mat2 normalized() const;
    double determinant() const;

    void apply_left(const Mat2& factor);
};

// Largest singular value, in log form.
double log_spectral_norm(const ScaledMatrix2& t);

// [[v - E, -1], [1, 0]]
Mat2 one_step(double v, Energy e);

struct TraceEntry {
    int length = 0;
    double log_norm = 0.0;
    ScaledMatrix2 matrix;
};

struct TransferTrace {
    std::vector<TraceEntry> entries;
};

struct TransferProduct {
    ScaledMatrix2 matrix;
    TransferTrace trace;
};

// T_L(E) = one_step(v(L), E) ... one_step(v(0), E), plus snapshots at the
// requested checkpoints (strictly increasing, within [0, L]).
//
// log norms recorded in the trace are clamped at 0: every product here is
// unimodular, so ||T|| >= 1 and negative values are rounding noise.
TransferProduct product(const PotentialValues& pot, Energy e, int length,
                        std::span<const int> checkpoints = {});

} // namespace ebb
