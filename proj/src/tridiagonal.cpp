#include "ebb/tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <lapacke.h>

#include "ebb/errors.hpp"

namespace ebb {

namespace {

lapack_int gttrf(lapack_int n, double* dl, double* d, double* du, double* du2, lapack_int* ipiv) {
    return LAPACKE_dgttrf(n, dl, d, du, du2, ipiv);
}
lapack_int gttrf(lapack_int n, std::complex<double>* dl, std::complex<double>* d, std::complex<double>* du,
                 std::complex<double>* du2, lapack_int* ipiv) {
    return LAPACKE_zgttrf(n, reinterpret_cast<lapack_complex_double*>(dl),
                          reinterpret_cast<lapack_complex_double*>(d), reinterpret_cast<lapack_complex_double*>(du),
                          reinterpret_cast<lapack_complex_double*>(du2), ipiv);
}

lapack_int gtcon(lapack_int n, const double* dl, const double* d, const double* du, const double* du2,
                 const lapack_int* ipiv, double anorm, double* rcond) {
    return LAPACKE_dgtcon('1', n, dl, d, du, du2, ipiv, anorm, rcond);
}
lapack_int gtcon(lapack_int n, const std::complex<double>* dl, const std::complex<double>* d,
                 const std::complex<double>* du, const std::complex<double>* du2, const lapack_int* ipiv,
                 double anorm, double* rcond) {
    return LAPACKE_zgtcon('1', n, reinterpret_cast<const lapack_complex_double*>(dl),
                          reinterpret_cast<const lapack_complex_double*>(d),
                          reinterpret_cast<const lapack_complex_double*>(du),
                          reinterpret_cast<const lapack_complex_double*>(du2), ipiv, anorm, rcond);
}

lapack_int gttrs(lapack_int n, lapack_int nrhs, const double* dl, const double* d, const double* du,
                 const double* du2, const lapack_int* ipiv, double* b) {
    return LAPACKE_dgttrs(LAPACK_COL_MAJOR, 'N', n, nrhs, dl, d, du, du2, ipiv, b, n);
}
lapack_int gttrs(lapack_int n, lapack_int nrhs, const std::complex<double>* dl, const std::complex<double>* d,
                 const std::complex<double>* du, const std::complex<double>* du2, const lapack_int* ipiv,
                 std::complex<double>* b) {
    return LAPACKE_zgttrs(LAPACK_COL_MAJOR, 'N', n, nrhs, reinterpret_cast<const lapack_complex_double*>(dl),
                          reinterpret_cast<const lapack_complex_double*>(d),
                          reinterpret_cast<const lapack_complex_double*>(du),
                          reinterpret_cast<const lapack_complex_double*>(du2), ipiv,
                          reinterpret_cast<lapack_complex_double*>(b), n);
}

} // namespace

template <class Scalar>
TridiagonalLU<Scalar>::TridiagonalLU(std::span<const Scalar> sub, std::span<const Scalar> diag,
                                     std::span<const Scalar> super)
    : sub_(sub.begin(), sub.end()), diag_(diag.begin(), diag.end()), super_(super.begin(), super.end()) {
    const std::size_t n = diag_.size();
    if (n == 0 || sub_.size() + 1 != n || super_.size() + 1 != n)
        throw InputError("tridiagonal: inconsistent band sizes");

    // 1-norm = max column sum of |entries|
    double anorm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col = std::abs(diag_[j]);
        if (j > 0) col += std::abs(super_[j - 1]);
        if (j + 1 < n) col += std::abs(sub_[j]);
        anorm = std::max(anorm, col);
    }

    super2_.assign(n > 2 ? n - 2 : 1, Scalar{});
    pivots_.assign(n, 0);
    // LAPACK wants non-null pointers even for n == 1
    if (sub_.empty()) sub_.push_back(Scalar{});
    if (super_.empty()) super_.push_back(Scalar{});

    const auto ln = static_cast<lapack_int>(n);
    const lapack_int info = gttrf(ln, sub_.data(), diag_.data(), super_.data(), super2_.data(), pivots_.data());
    if (info < 0) throw NumericalError("gttrf: illegal argument " + std::to_string(-info));
    if (info > 0 || !std::isfinite(anorm)) {
        singular_ = true;
        rcond_ = 0.0;
        return;
    }
    const lapack_int cinfo =
        gtcon(ln, sub_.data(), diag_.data(), super_.data(), super2_.data(), pivots_.data(), anorm, &rcond_);
    if (cinfo != 0) throw NumericalError("gtcon failed with info " + std::to_string(cinfo));
}

template <class Scalar>
double TridiagonalLU<Scalar>::condition() const {
    return rcond_ > 0.0 ? 1.0 / rcond_ : std::numeric_limits<double>::infinity();
}

template <class Scalar>
double TridiagonalLU<Scalar>::log_abs_det() const {
    if (singular_) return -std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (const auto& u : diag_) total += std::log(std::abs(u));
    return total;
}

template <class Scalar>
void TridiagonalLU<Scalar>::solve(std::span<Scalar> rhs, int nrhs) const {
    if (singular_) throw NumericalError("tridiagonal: solve with a singular factorization");
    if (nrhs < 1 || rhs.size() != size() * static_cast<std::size_t>(nrhs))
        throw InputError("tridiagonal: rhs size mismatch");
    const lapack_int info = gttrs(static_cast<lapack_int>(size()), nrhs, sub_.data(), diag_.data(), super_.data(),
                                  super2_.data(), pivots_.data(), rhs.data());
    if (info != 0) throw NumericalError("gttrs failed with info " + std::to_string(info));
}

template class TridiagonalLU<double>;
template class TridiagonalLU<std::complex<double>>;

} // namespace ebb
