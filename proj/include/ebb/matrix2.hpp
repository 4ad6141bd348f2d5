#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace ebb {

using Complex = std::complex<double>;

// Largest singular value of a 2x2 matrix from its squared Frobenius norm
// and |det|: s^2 = (F + sqrt(F^2 - 4|det|^2)) / 2.
inline double largest_singular_value(double frob2, double abs_det) {
    const double disc = std::max(0.0, (frob2 - 2.0 * abs_det) * (frob2 + 2.0 * abs_det));
    return std::sqrt(0.5 * (frob2 + std::sqrt(disc)));
}

// Row-major real 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
    double a = 0, b = 0, c = 0, d = 0;

    static constexpr Mat2 identity() { return {1, 0, 0, 1}; }

    double det() const { return a * d - b * c; }
    double max_abs() const { return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}); }
    double frobenius2() const { return a * a + b * b + c * c + d * d; }
    double spectral_norm() const { return largest_singular_value(frobenius2(), std::abs(det())); }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend Mat2 operator*(double s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

// Complex 2x2 matrix indexed by the two junction sites, l and r.
struct CMat2 {
    Complex ll{}, lr{}, rl{}, rr{};

    static CMat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static CMat2 diagonal(Complex l, Complex r) { return {l, 0.0, 0.0, r}; }

    Complex det() const { return ll * rr - lr * rl; }
    CMat2 adjoint() const { return {std::conj(ll), std::conj(rl), std::conj(lr), std::conj(rr)}; }
    double frobenius2() const { return std::norm(ll) + std::norm(lr) + std::norm(rl) + std::norm(rr); }
    double frobenius() const { return std::sqrt(frobenius2()); }
    double spectral_norm() const { return largest_singular_value(frobenius2(), std::abs(det())); }
    double max_abs() const { return std::max({std::abs(ll), std::abs(lr), std::abs(rl), std::abs(rr)}); }

    // Caller checks det() first when singularity is possible.
    CMat2 inverse() const {
        const Complex dt = det();
        return {rr / dt, -lr / dt, -rl / dt, ll / dt};
    }

    friend CMat2 operator*(const CMat2& x, const CMat2& y) {
        return {x.ll * y.ll + x.lr * y.rl, x.ll * y.lr + x.lr * y.rr, x.rl * y.ll + x.rr * y.rl,
                x.rl * y.lr + x.rr * y.rr};
    }
    friend CMat2 operator+(const CMat2& x, const CMat2& y) {
        return {x.ll + y.ll, x.lr + y.lr, x.rl + y.rl, x.rr + y.rr};
    }
    friend CMat2 operator-(const CMat2& x, const CMat2& y) {
        return {x.ll - y.ll, x.lr - y.lr, x.rl - y.rl, x.rr - y.rr};
    }
    friend CMat2 operator*(Complex s, const CMat2& x) { return {s * x.ll, s * x.lr, s * x.rl, s * x.rr}; }
    friend bool operator==(const CMat2&, const CMat2&) = default;
};

// ||x - y||_F / max(||x||_F, ||y||_F), and 0 when both vanish.
inline double relative_difference(const CMat2& x, const CMat2& y) {
    const double scale = std::max(x.frobenius(), y.frobenius());
    if (scale == 0.0) return 0.0;
    return (x - y).frobenius() / scale;
}

} // namespace ebb
