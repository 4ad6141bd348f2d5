#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "ebb/errors.hpp"
#include "ebb/potentials.hpp"

using namespace ebb;

TEST_CASE("generate simple potentials") {
    CHECK(generate(potential::Zero{}, 3).values == std::vector<double>{0, 0, 0, 0});
    CHECK(generate(potential::Periodic{{2.5, 0.0}}, 3).values == std::vector<double>{2.5, 0, 2.5, 0});
    CHECK(generate(potential::Constant{-0.75}, 2).values == std::vector<double>{-0.75, -0.75, -0.75});
    CHECK(generate(potential::Periodic{{1, 2, 3}}, 4).values == std::vector<double>{1, 2, 3, 1, 2});

    const auto am = generate(potential::AlmostMathieu{0.5, 0.3, 0.1}, 20);
    for (int x = 0; x <= 20; ++x) {
        const double expect = 0.5 * std::cos(2.0 * std::numbers::pi * (0.3 * x + 0.1));
        CHECK(am[x] == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("anderson potential: range, prefix stability, determinism") {
    const potential::AndersonRandom spec{1.0, 42};
    const auto big = generate(spec, 10000);
    const auto small = generate(spec, 1000);
    REQUIRE(big.size() == 10001);
    for (double v : big.values) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
    for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i] == big[i]);
    CHECK(generate(spec, 10000).values == big.values);

    // different seeds decorrelate
    const auto other = generate(potential::AndersonRandom{1.0, 43}, 10000);
    int equal = 0;
    for (std::size_t i = 0; i < other.size(); ++i) equal += other[i] == big[i];
    CHECK(equal < 5);

    double mean = 0.0;
    for (double v : big.values) mean += v;
    mean /= static_cast<double>(big.size());
    CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("prefix stability for every generator") {
    const std::vector<PotentialSpec> specs{potential::Zero{}, potential::Constant{1.5},
                                           potential::Periodic{{3.0, 0.0, -1.0}},
                                           potential::AndersonRandom{2.0, 7},
                                           potential::AlmostMathieu{1.0, 0.618, 0.25}};
    for (const auto& spec : specs) {
        const auto b = generate(spec, 500);
        for (int l : {1, 2, 17, 499}) {
            const auto a = generate(spec, l);
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
        }
    }
}

TEST_CASE("potential files") {
    const auto path = std::filesystem::temp_directory_path() / "ebb_test_potential.txt";
    {
        std::ofstream out(path);
        out << "0.5\n-1\n\n2e-1\n";
    }
    const auto values = generate(potential::FromFile{path}, 2);
    CHECK(values.values == std::vector<double>{0.5, -1.0, 0.2});
    CHECK_THROWS_AS(generate(potential::FromFile{path}, 5), InputError);
    {
        std::ofstream out(path);
        out << "0.5\nabc\n";
    }
    CHECK_THROWS_AS(read_potential_file(path), InputError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_potential_file(path), InputError);
}

TEST_CASE("invalid potential specs") {
    CHECK_THROWS_AS(generate(potential::Periodic{{}}, 3), InputError);
    CHECK_THROWS_AS(generate(potential::AndersonRandom{-1.0, 1}, 3), InputError);
    CHECK_THROWS_AS(generate(potential::Zero{}, 0), InputError);
    const SampleSpec empty{0, PotentialValues{}};
    CHECK_THROWS_AS(empty.validate(), InputError);
}

TEST_CASE("counter_uniform is in [0, 1) and keyed by seed") {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const double u = counter_uniform(9, i);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK(counter_uniform(1, 5) != counter_uniform(2, 5));
    CHECK(counter_uniform(1, 5) == counter_uniform(1, 5));
}
