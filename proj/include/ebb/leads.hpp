#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "ebb/model.hpp"

namespace ebb {

namespace lead {

// Half-line chain h = -k Delta on l^2(Z+), coupled through chi = kappa delta_0.
struct SemiInfiniteLaplacian {
    double hopping = 1.0;
    double coupling = 1.0;
};

// Sampled boundary values F(E + i0), linearly interpolated in Re and Im.
struct Tabulated {
    std::vector<double> energy;
    std::vector<double> re;
    std::vector<double> im;
    std::string source; // file name, for messages
};

} // namespace lead

using LeadModel = std::variant<lead::SemiInfiniteLaplacian, lead::Tabulated>;

// F(E + i0); Im >= 0 always.
using WeissValue = std::complex<double>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double e) const { return lo < e && e < hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of disjoint open intervals, sorted.
struct EnergyWindow {
    std::vector<Interval> intervals;

    bool empty() const { return intervals.empty(); }
    double measure() const;
    bool contains(double e) const;
    // Removes `margin` from both ends of every interval, dropping intervals
    // that collapse.
    EnergyWindow shrink(double margin) const;
};

void validate(const LeadModel& lead);

WeissValue weiss_boundary(const LeadModel& lead, Energy e);

EnergyWindow band_support(const LeadModel& lead);

EnergyWindow sigma_intersection(const LeadModel& left, const LeadModel& right);

EnergyWindow intersect(const EnergyWindow& x, const EnergyWindow& y);

// CSV with header `E,re_F,im_F`, E strictly increasing, im_F >= 0.
lead::Tabulated read_lead_table(const std::filesystem::path& path);

std::string describe(const LeadModel& lead);

} // namespace ebb
