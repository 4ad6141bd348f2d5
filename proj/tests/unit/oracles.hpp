#pragma once

// Reference computations that share no code with the library: used to
// check it, never called by it.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline double fermi(double e, double beta, double mu) { return 1.0 / (1.0 + std::exp(beta * (e - mu))); }

// <delta_0, (h_N - E - i eps)^{-1} delta_0> times kappa^2 for a chain of N
// sites with hopping k and no on-site term, by the continued fraction
// g_j = 1 / (-z - k^2 g_{j+1}) run from the free end.
inline cplx weiss_truncated(double k, double kappa, double e, int n = 100000, double eps = 1e-4) {
    const cplx z(e, eps);
    cplx g = 0.0;
    for (int j = 0; j < n; ++j) g = 1.0 / (-z - k * k * g);
    return kappa * kappa * g;
}

// Dense Gaussian elimination with partial pivoting; returns column `col`
// of A^{-1}.
inline std::vector<cplx> dense_solve_column(std::vector<std::vector<cplx>> a, std::size_t col) {
    const std::size_t n = a.size();
    std::vector<cplx> b(n, 0.0);
    b[col] = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (std::abs(a[piv][k]) == 0.0) throw std::runtime_error("singular");
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<cplx> x(n);
    for (std::size_t i = n; i-- > 0;) {
        cplx s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

// 2x2 boundary block of (h - E - fl P_0 - fr P_L)^{-1}, h with hopping -1.
struct Block {
    cplx ll, lr, rl, rr;
};

inline Block dense_green(const std::vector<double>& v, double e, cplx fl, cplx fr) {
    const std::size_t n = v.size();
    std::vector<std::vector<cplx>> a(n, std::vector<cplx>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = v[i] - e;
        if (i + 1 < n) a[i][i + 1] = a[i + 1][i] = -1.0;
    }
    a[0][0] -= fl;
    a[n - 1][n - 1] -= fr;
    const auto c0 = dense_solve_column(a, 0);
    const auto cl = dense_solve_column(a, n - 1);
    return {c0[0], cl[0], c0[n - 1], cl[n - 1]};
}

// Free lead with k = kappa = 1, closed form written out independently.
inline cplx free_lead(double e) {
    if (std::abs(e) < 2.0) return cplx(-e / 2.0, std::sqrt(4.0 - e * e) / 2.0);
    return cplx((-e + (e > 0 ? 1.0 : -1.0) * std::sqrt(e * e - 4.0)) / 2.0, 0.0);
}

inline double dense_transmission(const std::vector<double>& v, double e) {
    const cplx f = free_lead(e);
    const Block g = dense_green(v, e, f, f);
    return 4.0 * f.imag() * f.imag() * std::norm(g.lr);
}

} // namespace oracle
