#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "ebb/quadrature.hpp"

using namespace ebb;

TEST_CASE("smooth integrals") {
    const EnergyWindow w{{{0.0, std::numbers::pi}}};
    QuadratureOptions opts;
    opts.edge_margin = 0.0;
    opts.tolerance = 1e-12;
    const auto r = integrate_adaptive<2>([](double x) { return std::array<double, 2>{std::sin(x), x * x}; }, w, opts);
    CHECK(r.converged);
    CHECK(std::abs(r.value[0] - 2.0) < 1e-12);
    CHECK(std::abs(r.value[1] - std::pow(std::numbers::pi, 3) / 3.0) < 1e-11);
    CHECK(r.error[0] <= 1e-12);
    CHECK(r.evaluations == 15 * static_cast<long>(2 * r.panels - 1));
}

TEST_CASE("oscillatory integrand over a union of intervals") {
    const EnergyWindow w{{{-2.0, -1.0}, {0.5, 2.0}}};
    QuadratureOptions opts;
    opts.edge_margin = 0.0;
    opts.tolerance = 1e-10;
    opts.max_initial_panel = 0.05;
    const double k = 80.0;
    const auto r = integrate_adaptive<1>([&](double x) { return std::array<double, 1>{std::cos(k * x)}; }, w, opts);
    auto prim = [&](double x) { return std::sin(k * x) / k; };
    const double exact = prim(-1.0) - prim(-2.0) + prim(2.0) - prim(0.5);
    CHECK(r.converged);
    CHECK(std::abs(r.value[0] - exact) < 1e-10);
}

TEST_CASE("edge margins, empty windows and evaluation budget") {
    QuadratureOptions opts;
    opts.edge_margin = 0.25;
    const auto one = [](double) { return std::array<double, 1>{1.0}; };
    CHECK(integrate_adaptive<1>(one, EnergyWindow{{{0.0, 2.0}}}, opts).value[0] == doctest::Approx(1.5));
    const auto none = integrate_adaptive<1>(one, EnergyWindow{{{0.0, 0.4}}}, opts);
    CHECK(none.value[0] == 0.0);
    CHECK(none.evaluations == 0);

    opts.edge_margin = 0.0;
    opts.max_evaluations = 200;
    opts.tolerance = 1e-14;
    const auto kink = integrate_adaptive<1>([](double x) { return std::array<double, 1>{std::sqrt(std::abs(x - 0.3))}; },
                                            EnergyWindow{{{0.0, 1.0}}}, opts);
    CHECK_FALSE(kink.converged);
    CHECK(kink.evaluations <= 200);
}

TEST_CASE("result does not depend on the thread count") {
    QuadratureOptions opts;
    opts.max_initial_panel = 0.1;
    auto f = [](double x) { return std::array<double, 2>{std::exp(-x * x) * std::cos(10 * x), 1.0 / (1.0 + 25 * x * x)}; };
    const EnergyWindow w{{{-2.0, 2.0}}};
    const auto a = integrate_adaptive<2>(f, w, opts, 1);
    const auto b = integrate_adaptive<2>(f, w, opts, 4);
    CHECK(a.value == b.value);
    CHECK(a.error == b.error);
    CHECK(a.evaluations == b.evaluations);
}
