#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace ebb {

namespace potential {

struct Zero {};

struct Constant {
    double value = 0.0;
};

// v(x) = cell[x mod cell.size()]
struct Periodic {
    std::vector<double> cell;
};

// i.i.d. uniform on [-amplitude, amplitude], keyed per site by (seed, x).
struct AndersonRandom {
    double amplitude = 0.0;
    std::uint64_t seed = 0;
};

// v(x) = coupling * cos(2 pi (frequency x + phase))
struct AlmostMathieu {
    double coupling = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
};

// One real per line, sites 0, 1, 2, ...
struct FromFile {
    std::filesystem::path path;
};

} // namespace potential

using PotentialSpec = std::variant<potential::Zero, potential::Constant, potential::Periodic,
                                   potential::AndersonRandom, potential::AlmostMathieu,
                                   potential::FromFile>;

// On-site potential restricted to sites 0..L.
struct PotentialValues {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t x) const { return values[x]; }
    // Largest L this restriction supports.
    int max_length() const { return static_cast<int>(values.size()) - 1; }
};

// A sample of sites 0..length, coupled to the left reservoir at 0 and to
// the right one at `length`.
struct SampleSpec {
    int length = 1;
    PotentialValues potential;

    void validate() const;
};

void validate(const PotentialSpec& spec);

// Values v(0..length). Prefix-stable: generate(s, L1) is the first L1+1
// entries of generate(s, L2) whenever L1 <= L2.
PotentialValues generate(const PotentialSpec& spec, int length);

PotentialValues read_potential_file(const std::filesystem::path& path);

// Uniform draw in [0, 1) that depends only on (seed, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t counter);

std::string describe(const PotentialSpec& spec);

} // namespace ebb
