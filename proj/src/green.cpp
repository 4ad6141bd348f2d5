#include "ebb/green.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "ebb/errors.hpp"
#include "ebb/tridiagonal.hpp"

namespace ebb {

namespace {

void check_length(const PotentialValues& pot, int length) {
    if (length < 1) throw InputError("sample length must be >= 1");
    if (pot.size() < static_cast<std::size_t>(length) + 1)
        throw InputError("potential shorter than sample length + 1");
}

std::string at_energy(Energy e, int length) {
    std::ostringstream os;
    os.precision(17);
    os << " at E=" << e << ", L=" << length;
    return os.str();
}

// Boundary block of H^{-1} for a tridiagonal H with off-diagonals -1.
template <class Scalar>
DirectGreen boundary_block(std::vector<Scalar> diag) {
    const std::size_t n = diag.size();
    const std::vector<Scalar> off(n - 1, Scalar(-1.0));
    TridiagonalLU<Scalar> lu(off, diag, off);
    DirectGreen out;
    out.condition = lu.condition();
    out.log_abs_g_lr = -lu.log_abs_det();
    if (lu.singular()) return out;

    std::vector<Scalar> rhs(2 * n, Scalar{});
    rhs[0] = 1.0;         // delta_0
    rhs[n + n - 1] = 1.0; // delta_L
    lu.solve(rhs, 2);
    out.green = {rhs[0], rhs[n], rhs[n - 1], rhs[n + n - 1]};
    return out;
}

} // namespace

SelfEnergyPair self_energies(const LeadModel& left, const LeadModel& right, Energy e) {
    return {weiss_boundary(left, e), weiss_boundary(right, e)};
}

GreenMatrix2 sample_green_via_transfer(const ScaledMatrix2& t) {
    const Mat2 m = t.normalized();
    if (!(std::abs(m.a) >= 1e-12 * m.spectral_norm()))
        throw ResonanceError("T_11 vanishes: energy is a Dirichlet eigenvalue of the sample");
    const double inv_a = std::exp(-t.log_scale()) / m.a;
    return {-m.b / m.a, inv_a, inv_a, m.c / m.a};
}

DirectGreen solve_sample_green(const PotentialValues& pot, Energy e, int length) {
    check_length(pot, length);
    std::vector<double> diag(static_cast<std::size_t>(length) + 1);
    for (std::size_t x = 0; x < diag.size(); ++x) diag[x] = pot[x] - e;
    return boundary_block(std::move(diag));
}

GreenMatrix2 sample_green_direct(const PotentialValues& pot, Energy e, int length) {
    auto r = solve_sample_green(pot, e, length);
    if (!(r.condition <= kMaxCondition))
        throw ResonanceError("h_S - E is singular or ill-conditioned" + at_energy(e, length));
    return r.green;
}

GreenMatrix2 coupled_green(const GreenMatrix2& g0, const SelfEnergyPair& se) {
    const CMat2 m = CMat2::identity() - g0 * se.as_matrix();
    const Complex det = m.det();
    if (std::abs(det) < 1e-14) throw NumericalError("I - G0 F is singular");
    return m.inverse() * g0;
}

DirectGreen solve_coupled_green(const PotentialValues& pot, Energy e, int length, const SelfEnergyPair& se) {
    check_length(pot, length);
    if (!(se.left.imag() > 0.0 || se.right.imag() > 0.0))
        throw DomainError("coupled Green matrix needs an open channel (Im F > 0) in at least one lead" +
                          at_energy(e, length));
    std::vector<Complex> diag(static_cast<std::size_t>(length) + 1);
    for (std::size_t x = 0; x < diag.size(); ++x) diag[x] = pot[x] - e;
    diag.front() -= se.left;
    diag.back() -= se.right;
    return boundary_block(std::move(diag));
}

GreenMatrix2 coupled_green_direct(const PotentialValues& pot, Energy e, int length, const SelfEnergyPair& se) {
    auto r = solve_coupled_green(pot, e, length, se);
    if (!(r.condition <= kMaxCondition))
        throw NumericalError("coupled sample system is ill-conditioned" + at_energy(e, length));
    return r.green;
}

double graph_map_residual(const GreenMatrix2& g, const ScaledMatrix2& t, const SelfEnergyPair& se) {
    const Mat2 m = t.normalized();
    const double norm_m = m.spectral_norm();
    // T w - r = e^s (m w - e^{-s} r), and ||T|| = e^s ||m||.
    const double shrink = std::exp(-t.log_scale());
    double worst = 0.0;
    for (int col = 0; col < 2; ++col) {
        const Complex x = col == 0 ? 1.0 : 0.0;
        const Complex y = col == 0 ? 0.0 : 1.0;
        const Complex u = col == 0 ? g.ll : g.lr;
        const Complex v = col == 0 ? g.rl : g.rr;
        const Complex w0 = u;
        const Complex w1 = x + se.left * u;
        const Complex r0 = (y + se.right * v) * shrink;
        const Complex r1 = v * shrink;
        const Complex d0 = m.a * w0 + m.b * w1 - r0;
        const Complex d1 = m.c * w0 + m.d * w1 - r1;
        worst = std::max(worst, std::sqrt(std::norm(d0) + std::norm(d1)) / norm_m);
    }
    return worst;
}

GraphCheck graph_map_check(const GreenMatrix2& g, const ScaledMatrix2& t, const SelfEnergyPair& se, double tol) {
    const double r = graph_map_residual(g, t, se);
    return {r, r < tol};
}

} // namespace ebb
