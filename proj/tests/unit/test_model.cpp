#include <doctest.h>

#include <cmath>
#include <string>

#include "ebb/errors.hpp"
#include "ebb/model.hpp"
#include "oracles.hpp"

using namespace ebb;

TEST_CASE("xi is beta (E - mu)") {
    CHECK(xi(0.3, 7.0, 0.3) == 0.0);
    CHECK(xi(1.0, 2.0, 0.0) == 2.0);
    CHECK(xi(0.0, 1.0, 1.0) == -1.0);
}

TEST_CASE("fermi_density values") {
    CHECK(fermi_density(0.25, 3.0, 0.25) == 0.5);
    const double tail = fermi_density(1000.0, 1.0, 0.0);
    CHECK(std::isfinite(tail));
    CHECK(tail >= 0.0);
    CHECK(tail <= 1e-300);
    CHECK(fermi_density(-1000.0, 1.0, 0.0) == 1.0);
    // 1 / (1 + e^-1)
    CHECK(fermi_density(0.0, 1.0, 1.0) == doctest::Approx(oracle::fermi(0.0, 1.0, 1.0)).epsilon(1e-15));
    CHECK(fermi_density(0.0, 1.0, 1.0) == doctest::Approx(0.7310585786300049).epsilon(1e-15));
}

TEST_CASE("fermi_density particle-hole symmetry and monotonicity") {
    for (double beta : {0.1, 1.0, 5.0, 40.0}) {
        for (double mu : {-1.0, 0.0, 0.7}) {
            double prev = 2.0;
            for (int i = 0; i <= 400; ++i) {
                const double e = -4.0 + 0.02 * i;
                const double f = fermi_density(e, beta, mu);
                CHECK(std::abs(f + fermi_density(2.0 * mu - e, beta, mu) - 1.0) < 1e-14);
                CHECK(f <= prev);
                if (beta * std::abs(e - mu) < 30.0) CHECK(f < prev);
                prev = f;
            }
        }
    }
}

TEST_CASE("sign of the density difference matches the sign of the reduced-energy difference") {
    const ThermoParams t{1.0, 3.0, 0.4, -0.2};
    for (int i = 0; i <= 800; ++i) {
        const double e = -4.0 + 0.01 * i;
        const double drho = fermi_density(e, t.beta_l, t.mu_l) - fermi_density(e, t.beta_r, t.mu_r);
        const double dxi = xi(e, t.beta_r, t.mu_r) - xi(e, t.beta_l, t.mu_l);
        CHECK(drho * dxi >= 0.0);
        if (std::abs(dxi) > 1e-9 && std::abs(drho) > 1e-300) CHECK((drho > 0) == (dxi > 0));
    }
}

TEST_CASE("thermo validation names the field") {
    ThermoParams t{-1.0, 1.0, 0.0, 0.0};
    try {
        t.validate();
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("thermo.beta_l") != std::string::npos);
    }
    t = {1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(t.validate(), InputError);
    t = {1.0, 1.0, NAN, 0.0};
    CHECK_THROWS_AS(t.validate(), InputError);
    CHECK(ThermoParams{2.0, 2.0, 0.1, 0.1}.is_equilibrium());
    CHECK_FALSE(ThermoParams{2.0, 2.0, 0.1, 0.2}.is_equilibrium());
}
