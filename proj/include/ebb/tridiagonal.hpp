#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ebb {

// LU factorization with partial pivoting of a tridiagonal matrix (LAPACK
// ?gttrf), with a 1-norm condition estimate (?gtcon).
template <class Scalar>
class TridiagonalLU {
public:
    // sub/super have n-1 entries, diag has n.
    TridiagonalLU(std::span<const Scalar> sub, std::span<const Scalar> diag, std::span<const Scalar> super);

    std::size_t size() const { return diag_.size(); }
    bool singular() const { return singular_; }

    // Reciprocal 1-norm condition number estimate; 0 when singular.
    double reciprocal_condition() const { return rcond_; }
    double condition() const;

    // log |det A| from the pivots of U; -inf when singular. Finite even when
    // det A itself would overflow or underflow.
    double log_abs_det() const;

    // Solves in place; `rhs` is column-major, size() x nrhs.
    void solve(std::span<Scalar> rhs, int nrhs) const;

private:
    std::vector<Scalar> sub_, diag_, super_, super2_;
    std::vector<int> pivots_;
    bool singular_ = false;
    double rcond_ = 0.0;
};

extern template class TridiagonalLU<double>;
extern template class TridiagonalLU<std::complex<double>>;

} // namespace ebb
