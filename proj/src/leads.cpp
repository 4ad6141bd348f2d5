#include "ebb/leads.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ebb/errors.hpp"

namespace ebb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

WeissValue laplacian_weiss(const lead::SemiInfiniteLaplacian& p, double e) {
    const double k = p.hopping;
    const double k2 = k * k;
    const double kappa2 = p.coupling * p.coupling;
    const double edge = 2.0 * k;
    if (std::abs(e) < edge) {
        // (2k - e)(2k + e) avoids cancellation close to the edges
        const double root = std::sqrt((edge - e) * (edge + e));
        return {kappa2 * -e / (2.0 * k2), kappa2 * root / (2.0 * k2)};
    }
    // Real outside the band. -e + sqrt(e^2 - 4k^2) = -4k^2 / (e + sqrt(...))
    // for e > 0, and the mirror image for e < 0; this is the root that
    // decays like -kappa^2 / e.
    const double root = std::sqrt((std::abs(e) - edge) * (std::abs(e) + edge));
    const double f = -2.0 / (e + std::copysign(root, e));
    return {kappa2 * f, 0.0};
}

WeissValue tabulated_weiss(const lead::Tabulated& t, double e) {
    const auto& xs = t.energy;
    if (xs.empty() || e < xs.front() || e > xs.back())
        throw DomainError("energy " + std::to_string(e) + " outside lead table range" +
                          (t.source.empty() ? std::string() : " (" + t.source + ")"));
    auto it = std::upper_bound(xs.begin(), xs.end(), e);
    std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    if (hi == xs.size()) hi = xs.size() - 1;
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    if (lo == hi) return {t.re[lo], std::max(0.0, t.im[lo])};
    const double w = (e - xs[lo]) / (xs[hi] - xs[lo]);
    const double re = (1.0 - w) * t.re[lo] + w * t.re[hi];
    const double im = (1.0 - w) * t.im[lo] + w * t.im[hi];
    return {re, std::max(0.0, im)};
}

EnergyWindow tabulated_support(const lead::Tabulated& t) {
    EnergyWindow out;
    const auto& xs = t.energy;
    const auto& im = t.im;
    // Segment [x_i, x_{i+1}] is open unless both ends have Im F = 0. Runs of
    // open segments merge across nodes with Im F > 0 and split at zeros.
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (!(im[i] > 0.0 || im[i + 1] > 0.0)) continue;
        if (!out.intervals.empty() && out.intervals.back().hi == xs[i] && im[i] > 0.0)
            out.intervals.back().hi = xs[i + 1];
        else
            out.intervals.push_back({xs[i], xs[i + 1]});
    }
    return out;
}

} // namespace

double EnergyWindow::measure() const {
    double total = 0.0;
    for (const auto& iv : intervals) total += iv.length();
    return total;
}

bool EnergyWindow::contains(double e) const {
    return std::any_of(intervals.begin(), intervals.end(), [e](const Interval& iv) { return iv.contains(e); });
}

EnergyWindow EnergyWindow::shrink(double margin) const {
    EnergyWindow out;
    for (const auto& iv : intervals) {
        Interval s{iv.lo + margin, iv.hi - margin};
        if (s.hi > s.lo) out.intervals.push_back(s);
    }
    return out;
}

void validate(const LeadModel& lead) {
    std::visit(overloaded{
                   [](const lead::SemiInfiniteLaplacian& p) {
                       if (!(p.hopping > 0.0) || !std::isfinite(p.hopping))
                           throw InputError("lead hopping must be finite and > 0");
                       if (p.coupling == 0.0 || !std::isfinite(p.coupling))
                           throw InputError("lead coupling must be finite and nonzero");
                   },
                   [](const lead::Tabulated& t) {
                       if (t.energy.size() < 2 || t.re.size() != t.energy.size() || t.im.size() != t.energy.size())
                           throw InputError("lead table needs at least two rows of (E, re_F, im_F)");
                       for (std::size_t i = 0; i < t.energy.size(); ++i) {
                           if (!std::isfinite(t.energy[i]) || !std::isfinite(t.re[i]) || !std::isfinite(t.im[i]))
                               throw InputError("lead table entries must be finite");
                           if (t.im[i] < 0.0)
                               throw InputError("lead table row " + std::to_string(i + 1) +
                                                ": im_F < 0 is not a Herglotz boundary value");
                           if (i > 0 && !(t.energy[i] > t.energy[i - 1]))
                               throw InputError("lead table energies must be strictly increasing");
                       }
                   },
               },
               lead);
}

WeissValue weiss_boundary(const LeadModel& lead, Energy e) {
    return std::visit(overloaded{
                          [e](const lead::SemiInfiniteLaplacian& p) { return laplacian_weiss(p, e); },
                          [e](const lead::Tabulated& t) { return tabulated_weiss(t, e); },
                      },
                      lead);
}

EnergyWindow band_support(const LeadModel& lead) {
    return std::visit(overloaded{
                          [](const lead::SemiInfiniteLaplacian& p) {
                              return EnergyWindow{{{-2.0 * p.hopping, 2.0 * p.hopping}}};
                          },
                          [](const lead::Tabulated& t) { return tabulated_support(t); },
                      },
                      lead);
}

EnergyWindow intersect(const EnergyWindow& x, const EnergyWindow& y) {
    EnergyWindow out;
    std::size_t i = 0, j = 0;
    while (i < x.intervals.size() && j < y.intervals.size()) {
        const auto& a = x.intervals[i];
        const auto& b = y.intervals[j];
        const double lo = std::max(a.lo, b.lo);
        const double hi = std::min(a.hi, b.hi);
        if (lo < hi) out.intervals.push_back({lo, hi});
        if (a.hi < b.hi)
            ++i;
        else
            ++j;
    }
    return out;
}

EnergyWindow sigma_intersection(const LeadModel& left, const LeadModel& right) {
    return intersect(band_support(left), band_support(right));
}

lead::Tabulated read_lead_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open lead table " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw InputError(path.string() + ": empty lead table");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "E,re_F,im_F") throw InputError(path.string() + ": header must be `E,re_F,im_F`");

    lead::Tabulated t;
    t.source = path.string();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double e = 0, re = 0, im = 0;
        std::string rest;
        if (!(ss >> e >> re >> im) || (ss >> rest))
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected three numbers");
        t.energy.push_back(e);
        t.re.push_back(re);
        t.im.push_back(im);
    }
    validate(LeadModel{t});
    return t;
}

std::string describe(const LeadModel& lead) {
    return std::visit(overloaded{
                          [](const lead::SemiInfiniteLaplacian& p) {
                              std::ostringstream os;
                              os << "laplacian(hopping=" << p.hopping << ",coupling=" << p.coupling << ")";
                              return os.str();
                          },
                          [](const lead::Tabulated& t) { return "table(" + t.source + ")"; },
                      },
                      lead);
}

} // namespace ebb
