#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ebb/errors.hpp"
#include "ebb/fluxes.hpp"
#include "oracles.hpp"

using namespace ebb;

namespace {

const LeadModel kFree = lead::SemiInfiniteLaplacian{1.0, 1.0};

SystemConfig system(const PotentialSpec& spec, int length, const ThermoParams& thermo) {
    SystemConfig c;
    c.sample.length = length;
    c.sample.potential = generate(spec, length);
    c.lead_l = kFree;
    c.lead_r = kFree;
    c.thermo = thermo;
    return c;
}

} // namespace

TEST_CASE("spectral densities") {
    const ThermoParams eq{2.0, 2.0, 0.3, 0.3};
    const auto z = spectral_densities(0.7, 0.8, eq);
    CHECK(z.phi_l == 0.0);
    CHECK(z.j_l == 0.0);
    CHECK(z.sigma == 0.0);

    const ThermoParams t{1.0, 2.0, 1.0, 0.0};
    const auto d = spectral_densities(0.0, 1.0, t);
    const double drho = oracle::fermi(0.0, 1.0, 1.0) - 0.5;
    CHECK(d.j_l == doctest::Approx(drho).epsilon(1e-14));
    CHECK(d.j_l == doctest::Approx(0.2310585786300049).epsilon(1e-14));
    CHECK(d.phi_l == 0.0);
    CHECK(d.sigma == doctest::Approx(drho).epsilon(1e-14));
    CHECK(d.j_r == -d.j_l);
    CHECK(d.phi_r == -d.phi_l);

    const auto closed = spectral_densities(1.3, 0.0, t);
    CHECK(closed.phi_l == 0.0);
    CHECK(closed.j_l == 0.0);
    CHECK(closed.sigma == 0.0);
    CHECK_THROWS_AS(spectral_densities(0.0, 1.5, t), InputError);
}

TEST_CASE("conservation, second law and entropy identity at every node") {
    const ThermoParams t{0.5, 3.0, 0.7, -0.4};
    for (int i = 0; i <= 2000; ++i) {
        const double e = -2.5 + 0.0025 * i;
        const double tr = 0.5 + 0.5 * std::sin(7.0 * e);
        const auto d = spectral_densities(e, tr, t);
        CHECK(d.phi_l + d.phi_r == 0.0);
        CHECK(d.j_l + d.j_r == 0.0);
        CHECK(d.sigma >= 0.0);
        CHECK(std::abs(d.sigma - entropy_from_fluxes(d, t)) <= 1e-12 * std::max(1.0, d.sigma));
    }
}

TEST_CASE("integrated fluxes: equilibrium and closed channels") {
    const auto eq = integrate_fluxes(system(potential::AndersonRandom{1.0, 3}, 25, {1.3, 1.3, -0.2, -0.2}));
    for (double v : {eq.energy_flux_l, eq.energy_flux_r, eq.charge_flux_l, eq.charge_flux_r, eq.entropy_flux})
        CHECK(std::abs(v) < 1e-12);
    CHECK_FALSE(eq.no_open_channel);

    auto cfg = system(potential::Zero{}, 10, {1.0, 1.0, 0.5, -0.5});
    lead::Tabulated far;
    far.energy = {3, 4, 5};
    far.re = {0, 0, 0};
    far.im = {0, 1, 0};
    cfg.lead_r = far;
    const auto none = integrate_fluxes(cfg);
    CHECK(none.no_open_channel);
    CHECK(none.entropy_flux == 0.0);
    CHECK(none.energy_flux_l == 0.0);
    CHECK(none.charge_flux_l == 0.0);
    CHECK(none.evaluations == 0);
}

TEST_CASE("entropy flux against a brute-force trapezoid reference") {
    const ThermoParams t{1.0, 1.0, 0.5, -0.5};
    const auto r = integrate_fluxes(system(potential::Zero{}, 10, t));
    CHECK(r.converged);
    CHECK(r.entropy_flux > 0.0);

    const std::vector<double> v(11, 0.0);
    const int n = 10000;
    const double lo = -2.0 + 1e-6, hi = 2.0 - 1e-6, h = (hi - lo) / (n - 1);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = lo + h * i;
        const double drho = oracle::fermi(e, 1.0, 0.5) - oracle::fermi(e, 1.0, -0.5);
        const double dxi = (e + 0.5) - (e - 0.5);
        const double s = oracle::dense_transmission(v, e) * dxi * drho;
        sum += (i == 0 || i == n - 1 ? 0.5 : 1.0) * s;
    }
    const double reference = sum * h / (2.0 * std::numbers::pi);
    CHECK(r.entropy_flux == doctest::Approx(reference).epsilon(1e-3));
    CHECK(r.energy_flux_l + r.energy_flux_r == 0.0);
    CHECK(r.charge_flux_l + r.charge_flux_r == 0.0);
}

TEST_CASE("second law for randomized non-equilibrium settings") {
    for (int i = 0; i < 10; ++i) {
        const ThermoParams t{0.2 + 4.0 * counter_uniform(101, 4 * i), 0.2 + 4.0 * counter_uniform(101, 4 * i + 1),
                             -1.0 + 2.0 * counter_uniform(101, 4 * i + 2), -1.0 + 2.0 * counter_uniform(101, 4 * i + 3)};
        const auto r = integrate_fluxes(system(potential::AndersonRandom{1.0, 42}, 30, t));
        CHECK(r.entropy_flux >= -r.quadrature_error_estimate);
        CHECK(r.entropy_flux > 0.0);
        CHECK(r.min_sigma_density >= 0.0);
        CHECK(r.max_unitarity_residual < 1e-10);
    }
}

TEST_CASE("tightening the tolerance moves fluxes by less than the error estimate") {
    for (int length : {10, 100}) {
        auto cfg = system(potential::Zero{}, length, {1.0, 2.0, 0.5, -0.5});
        cfg.quadrature.tolerance = 1e-8;
        const auto coarse = integrate_fluxes(cfg);
        cfg.quadrature.tolerance = 0.5e-8;
        const auto fine = integrate_fluxes(cfg);
        CHECK(std::abs(fine.energy_flux_l - coarse.energy_flux_l) <= coarse.quadrature_error_estimate);
        CHECK(std::abs(fine.charge_flux_l - coarse.charge_flux_l) <= coarse.quadrature_error_estimate);
        CHECK(std::abs(fine.entropy_flux - coarse.entropy_flux) <= coarse.quadrature_error_estimate);
    }
}

TEST_CASE("thread count does not change integrated fluxes") {
    const auto cfg = system(potential::AndersonRandom{0.5, 9}, 40, {1.0, 2.0, 0.5, -0.5});
    const auto a = integrate_fluxes(cfg, 1);
    const auto b = integrate_fluxes(cfg, 3);
    CHECK(a.entropy_flux == b.entropy_flux);
    CHECK(a.energy_flux_l == b.energy_flux_l);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("closed channel evaluation") {
    const auto pot = generate(potential::Zero{}, 10);
    const auto p = evaluate_point(pot, 10, kFree, kFree, {1, 1, 0.5, -0.5}, 2.5);
    CHECK(p.transmission == 0.0);
    CHECK(p.unitarity_residual == 0.0);
    CHECK(p.densities.sigma == 0.0);
}
