#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ebb/errors.hpp"
#include "ebb/leads.hpp"
#include "oracles.hpp"

using namespace ebb;

namespace {

const LeadModel kFree = lead::SemiInfiniteLaplacian{1.0, 1.0};

lead::Tabulated plateau_table() {
    // Im F > 0 on (-3, -1) and (1, 3), zero elsewhere
    lead::Tabulated t;
    t.energy = {-4, -3, -2.5, -1, 0, 1, 2.5, 3, 4};
    t.re = {0, 0, 0.1, 0, 0, 0, -0.1, 0, 0};
    t.im = {0, 0, 1.0, 0, 0, 0, 1.0, 0, 0};
    t.source = "plateaus";
    return t;
}

} // namespace

TEST_CASE("weiss function against a truncated-lead oracle") {
    CHECK(std::abs(weiss_boundary(kFree, 0.0) - std::complex<double>(0, 1)) < 1e-15);
    CHECK(std::abs(weiss_boundary(kFree, 0.0) - oracle::weiss_truncated(1, 1, 0.0)) < 5e-3);

    const LeadModel strong = lead::SemiInfiniteLaplacian{1.0, 2.0};
    CHECK(std::abs(weiss_boundary(strong, 0.0) - std::complex<double>(0, 4)) < 1e-14);
    CHECK(std::abs(weiss_boundary(strong, 0.0) - oracle::weiss_truncated(1, 2, 0.0)) < 4 * 5e-3);

    const auto edge = weiss_boundary(kFree, 2.0);
    CHECK(edge.real() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(edge.imag() == 0.0);
    for (double e : {2.0 - 1e-3, 2.0 + 1e-3})
        CHECK(std::abs(weiss_boundary(kFree, e) - oracle::weiss_truncated(1, 1, e)) < 5e-2);

    for (double k : {1.0, 0.5}) {
        const LeadModel l = lead::SemiInfiniteLaplacian{k, 1.3};
        for (int i = 0; i < 200; ++i) {
            const double e = -2 * k + 0.05 + (4 * k - 0.1) * i / 199.0;
            CHECK(std::abs(weiss_boundary(l, e) - oracle::weiss_truncated(k, 1.3, e)) < 5e-3);
        }
    }
}

TEST_CASE("weiss function: Herglotz sign, support and asymptotics") {
    const LeadModel l = lead::SemiInfiniteLaplacian{0.7, 1.1};
    for (int i = 0; i <= 1000; ++i) {
        const double e = -3.0 + 0.006 * i;
        const auto f = weiss_boundary(l, e);
        CHECK(f.imag() >= 0.0);
        CHECK((f.imag() > 0.0) == (std::abs(e) < 1.4));
    }
    for (double sign : {1.0, -1.0}) {
        const double e = sign * 100.0 * 0.7;
        CHECK(std::abs(e * weiss_boundary(l, e).real() + 1.21) < 0.01 * 1.21);
    }
}

TEST_CASE("band support and intersections") {
    CHECK(band_support(kFree).intervals == std::vector<Interval>{{-2, 2}});
    CHECK(band_support(lead::SemiInfiniteLaplacian{0.5, 1.0}).intervals == std::vector<Interval>{{-1, 1}});
    CHECK(band_support(plateau_table()).intervals == std::vector<Interval>{{-3, -1}, {1, 3}});

    CHECK(sigma_intersection(kFree, kFree).intervals == std::vector<Interval>{{-2, 2}});
    CHECK(sigma_intersection(kFree, lead::SemiInfiniteLaplacian{0.5, 1.0}).intervals ==
          std::vector<Interval>{{-1, 1}});
    CHECK(sigma_intersection(kFree, plateau_table()).intervals == std::vector<Interval>{{-2, -1}, {1, 2}});

    lead::Tabulated shifted;
    shifted.energy = {3, 4, 5};
    shifted.re = {0, 0, 0};
    shifted.im = {0, 1, 0};
    CHECK(sigma_intersection(kFree, shifted).empty());

    const EnergyWindow w{{{-2, -1}, {1, 2}}};
    CHECK(w.measure() == 2.0);
    CHECK(w.contains(1.5));
    CHECK_FALSE(w.contains(0.0));
    CHECK(w.shrink(0.25).intervals == std::vector<Interval>{{-1.75, -1.25}, {1.25, 1.75}});
    CHECK(w.shrink(0.6).empty());
}

TEST_CASE("tabulated leads interpolate linearly and refuse extrapolation") {
    const auto t = plateau_table();
    const auto f = weiss_boundary(t, -2.75);
    CHECK(f.real() == doctest::Approx(0.05));
    CHECK(f.imag() == doctest::Approx(0.5));
    CHECK(weiss_boundary(t, 0.0) == std::complex<double>(0, 0));
    CHECK_THROWS_AS(weiss_boundary(t, 4.5), DomainError);
}

TEST_CASE("lead table round trip") {
    const auto path = std::filesystem::temp_directory_path() / "ebb_test_lead.csv";
    const LeadModel l = lead::SemiInfiniteLaplacian{1.0, 0.8};
    {
        std::ofstream out(path);
        out.precision(17);
        out << "E,re_F,im_F\n";
        for (int i = 0; i <= 400; ++i) {
            const double e = -2.0 + 0.01 * i;
            const auto f = weiss_boundary(l, e);
            out << e << ',' << f.real() << ',' << f.imag() << '\n';
        }
    }
    const auto table = read_lead_table(path);
    CHECK(table.energy.size() == 401);
    for (double e : {-1.5, 0.0, 0.333, 1.9}) CHECK(std::abs(weiss_boundary(table, e) - weiss_boundary(l, e)) < 1e-4);

    {
        std::ofstream out(path);
        out << "E,re_F,im_F\n0,0,1\n1,0,-0.5\n";
    }
    CHECK_THROWS_AS(read_lead_table(path), InputError);
    {
        std::ofstream out(path);
        out << "E,re,im\n0,0,1\n1,0,0.5\n";
    }
    CHECK_THROWS_AS(read_lead_table(path), InputError);
    std::filesystem::remove(path);
}

TEST_CASE("lead validation") {
    CHECK_THROWS_AS(validate(LeadModel{lead::SemiInfiniteLaplacian{0.0, 1.0}}), InputError);
    CHECK_THROWS_AS(validate(LeadModel{lead::SemiInfiniteLaplacian{1.0, 0.0}}), InputError);
    lead::Tabulated t;
    t.energy = {1, 0};
    t.re = {0, 0};
    t.im = {0, 0};
    CHECK_THROWS_AS(validate(LeadModel{t}), InputError);
}
