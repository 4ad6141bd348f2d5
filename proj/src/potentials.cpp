#include "ebb/potentials.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ebb/errors.hpp"

namespace ebb {

namespace {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

} // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t bits = mix64(mix64(seed) ^ counter);
    // top 53 bits -> [0, 1)
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

void validate(const PotentialSpec& spec) {
    std::visit(overloaded{
                   [](const potential::Periodic& p) {
                       if (p.cell.empty()) throw InputError("periodic potential needs a nonempty cell");
                       for (double c : p.cell)
                           if (!std::isfinite(c)) throw InputError("periodic cell entries must be finite");
                   },
                   [](const potential::AndersonRandom& p) {
                       if (!(p.amplitude >= 0.0) || !std::isfinite(p.amplitude))
                           throw InputError("anderson amplitude must be finite and >= 0");
                   },
                   [](const potential::Constant& p) {
                       if (!std::isfinite(p.value)) throw InputError("constant potential must be finite");
                   },
                   [](const potential::AlmostMathieu& p) {
                       if (!std::isfinite(p.coupling) || !std::isfinite(p.frequency) || !std::isfinite(p.phase))
                           throw InputError("almost-Mathieu parameters must be finite");
                   },
                   [](const auto&) {},
               },
               spec);
}

void SampleSpec::validate() const {
    if (length < 1) throw InputError("sample.length must be >= 1");
    if (potential.size() != static_cast<std::size_t>(length) + 1)
        throw InputError("sample potential must have length+1 entries");
}

PotentialValues generate(const PotentialSpec& spec, int length) {
    if (length < 1) throw InputError("sample length must be >= 1, got " + std::to_string(length));
    validate(spec);
    const std::size_t n = static_cast<std::size_t>(length) + 1;
    PotentialValues out;
    out.values.resize(n);
    auto& v = out.values;

    std::visit(overloaded{
                   [&](const potential::Zero&) {},
                   [&](const potential::Constant& p) { std::fill(v.begin(), v.end(), p.value); },
                   [&](const potential::Periodic& p) {
                       for (std::size_t x = 0; x < n; ++x) v[x] = p.cell[x % p.cell.size()];
                   },
                   [&](const potential::AndersonRandom& p) {
                       for (std::size_t x = 0; x < n; ++x)
                           v[x] = p.amplitude * (2.0 * counter_uniform(p.seed, x) - 1.0);
                   },
                   [&](const potential::AlmostMathieu& p) {
                       for (std::size_t x = 0; x < n; ++x)
                           v[x] = p.coupling *
                                  std::cos(2.0 * std::numbers::pi *
                                           (p.frequency * static_cast<double>(x) + p.phase));
                   },
                   [&](const potential::FromFile& p) {
                       auto all = read_potential_file(p.path);
                       if (all.size() < n)
                           throw InputError("potential file " + p.path.string() + " has " +
                                            std::to_string(all.size()) + " entries, need " +
                                            std::to_string(n));
                       std::copy_n(all.values.begin(), n, v.begin());
                   },
               },
               spec);
    return out;
}

PotentialValues read_potential_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open potential file " + path.string());
    PotentialValues out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        double value = 0.0;
        std::string rest;
        if (!(ss >> value) || (ss >> rest) || !std::isfinite(value))
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected one finite real");
        out.values.push_back(value);
    }
    return out;
}

std::string describe(const PotentialSpec& spec) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const potential::Zero&) { os << "zero"; },
                   [&](const potential::Constant& p) { os << "constant(" << p.value << ")"; },
                   [&](const potential::Periodic& p) {
                       os << "periodic[";
                       for (std::size_t i = 0; i < p.cell.size(); ++i) os << (i ? "," : "") << p.cell[i];
                       os << "]";
                   },
                   [&](const potential::AndersonRandom& p) {
                       os << "anderson(amplitude=" << p.amplitude << ",seed=" << p.seed << ")";
                   },
                   [&](const potential::AlmostMathieu& p) {
                       os << "almost_mathieu(" << p.coupling << "," << p.frequency << "," << p.phase << ")";
                   },
                   [&](const potential::FromFile& p) { os << "file(" << p.path.string() << ")"; },
               },
               spec);
    return os.str();
}

} // namespace ebb
