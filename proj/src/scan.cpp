#include "ebb/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ebb/errors.hpp"
#include "ebb/parallel.hpp"
#include "ebb/transfer.hpp"

namespace ebb {

namespace {

void check_envelope(Energy e, double transmission, double sigma, const ThermoParams& thermo) {
    const double bound = sigma_envelope(e, transmission, thermo);
    if (sigma < 0.0 || sigma > bound) {
        std::ostringstream os;
        os.precision(17);
        os << "entropy density " << sigma << " outside [0, " << bound << "] at E=" << e;
        throw InvariantViolation(os.str());
    }
}

void check_checkpoints(std::span<const int> checkpoints) {
    if (checkpoints.empty()) throw InputError("l_sweep needs at least one checkpoint");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1) throw InputError("checkpoints must be >= 1");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw InputError("checkpoints must be strictly increasing");
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

double sigma_envelope(Energy e, double transmission, const ThermoParams& thermo) {
    const double bmax = std::max(thermo.beta_l, thermo.beta_r);
    const double bmin = std::min(thermo.beta_l, thermo.beta_r);
    return 4.0 * transmission * bmax * (std::abs(e) + std::abs(thermo.mu_l) + std::abs(thermo.mu_r) + 2.0 / bmin);
}

std::vector<LSweepPoint> l_sweep(const PotentialSpec& spec, Energy e, const LeadModel& lead_l,
                                 const LeadModel& lead_r, const ThermoParams& thermo,
                                 std::span<const int> checkpoints, int threads) {
    check_checkpoints(checkpoints);
    thermo.validate();
    if (!sigma_intersection(lead_l, lead_r).contains(e)) {
        std::ostringstream os;
        os << "E=" << e << " lies outside the band intersection of the leads; the entropy density vanishes there";
        throw DomainError(os.str());
    }

    const int max_length = checkpoints.back();
    const PotentialValues pot = generate(spec, max_length);
    const TransferProduct tp = product(pot, e, max_length, checkpoints);

    const double thermal = (xi(e, thermo.beta_r, thermo.mu_r) - xi(e, thermo.beta_l, thermo.mu_l)) *
                           (fermi_density(e, thermo.beta_l, thermo.mu_l) - fermi_density(e, thermo.beta_r, thermo.mu_r));
    const double log_thermal = thermal > 0.0 ? std::log(thermal) : -std::numeric_limits<double>::infinity();

    std::vector<LSweepPoint> out(checkpoints.size());
    parallel_for(checkpoints.size(), threads, [&](std::size_t i) {
        const TraceEntry& entry = tp.trace.entries[i];
        const int length = entry.length;
        const auto p = evaluate_point(pot, length, lead_l, lead_r, thermo, e);
        check_envelope(e, p.transmission, p.densities.sigma, thermo);

        LSweepPoint& pt = out[i];
        pt.length = length;
        pt.sigma_density = p.densities.sigma;
        pt.transmission = p.transmission;
        pt.unitarity_residual = p.unitarity_residual;
        pt.log_transfer_norm = entry.log_norm;
        pt.log_sigma_density = p.log_transmission + log_thermal;
        const Mat2 m = entry.matrix.normalized();
        pt.resonance_flag = std::abs(m.a) < 1e-12 * m.spectral_norm();
    });
    return out;
}

std::vector<EnergyRecord> energy_sweep(const PotentialSpec& spec, int length, const LeadModel& lead_l,
                                       const LeadModel& lead_r, const ThermoParams& thermo,
                                       std::span<const Energy> grid, int threads) {
    thermo.validate();
    const PotentialValues pot = generate(spec, length);
    std::vector<EnergyRecord> out(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        EnergyRecord& r = out[i];
        r.energy = grid[i];
        try {
            const auto p = evaluate_point(pot, length, lead_l, lead_r, thermo, grid[i]);
            r.transmission = p.transmission;
            r.densities = p.densities;
            r.unitarity_residual = p.unitarity_residual;
            r.ok = true;
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& ex) {
            r.ok = false;
            r.error = ex.what();
            return;
        }
        check_envelope(r.energy, r.transmission, r.densities.sigma, thermo);
    });
    return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("fit_line needs >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw InputError("fit_line: x has no spread");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

std::string to_string(TransportLabel label) {
    switch (label) {
    case TransportLabel::persistent: return "persistent";
    case TransportLabel::vanishing: return "vanishing";
    case TransportLabel::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

TransportClassification classify_transport(std::span<const LSweepPoint> sweep,
                                           const ClassificationThresholds& th) {
    if (sweep.size() < th.min_checkpoints)
        throw InputError("classification needs at least " + std::to_string(th.min_checkpoints) + " checkpoints, got " +
                         std::to_string(sweep.size()));
    const double lo = sweep.front().length;
    const double hi = sweep.back().length;
    if (!(lo >= 1.0) || hi < th.min_span_ratio * lo)
        throw InputError("classification needs checkpoints spanning a factor " + std::to_string(th.min_span_ratio) +
                         " in L");

    TransportClassification c;
    c.max_length = sweep.back().length;
    const double lmax = hi;

    std::vector<double> ls, log_norm, log_sigma;
    bool sigma_finite = true;
    for (const auto& p : sweep) {
        ls.push_back(p.length);
        log_norm.push_back(p.log_transfer_norm);
        log_sigma.push_back(p.log_sigma_density);
        sigma_finite = sigma_finite && std::isfinite(p.log_sigma_density);
    }

    c.norm_fit = fit_line(ls, log_norm);
    c.norm_bounded = c.norm_fit.slope < th.bounded_norm_slope / lmax;
    c.norm_diverging = c.norm_fit.slope > th.diverging_norm_slope / lmax && c.norm_fit.r2 > th.diverging_min_r2;

    if (sigma_finite) {
        c.sigma_fit = fit_line(ls, log_sigma);
        const double log_min = *std::min_element(log_sigma.begin(), log_sigma.end());
        c.min_over_median = std::exp(log_min - median(log_sigma));
        c.sigma_vanishing = c.sigma_fit.slope < -th.sigma_slope / lmax && c.sigma_fit.r2 > th.sigma_min_r2;
        c.sigma_persistent = c.min_over_median > th.persistent_ratio;
    }

    if (c.sigma_vanishing)
        c.label = TransportLabel::vanishing;
    else if (c.sigma_persistent && c.norm_bounded)
        c.label = TransportLabel::persistent;
    else
        c.label = TransportLabel::indeterminate;
    return c;
}

EquivalenceReport equivalence_report(const PotentialSpec& spec, const LeadModel& lead_l, const LeadModel& lead_r,
                                     const ThermoParams& thermo, std::span<const Energy> grid,
                                     std::span<const int> checkpoints, const ClassificationThresholds& thresholds,
                                     int threads) {
    check_checkpoints(checkpoints);
    EquivalenceReport rep;
    rep.max_length = checkpoints.back();
    rep.rows.resize(grid.size());
    std::vector<double> residuals(grid.size(), 0.0);
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const auto sweep = l_sweep(spec, grid[i], lead_l, lead_r, thermo, checkpoints);
        auto& row = rep.rows[i];
        row.energy = grid[i];
        row.classification = classify_transport(sweep, thresholds);
        row.sigma_at_max_length = sweep.back().sigma_density;
        for (const auto& p : sweep) residuals[i] = std::max(residuals[i], p.unitarity_residual);
    });

    double sum_p = 0.0, sum_v = 0.0;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        rep.max_unitarity_residual = std::max(rep.max_unitarity_residual, residuals[i]);
        switch (row.classification.label) {
        case TransportLabel::persistent:
            ++rep.persistent;
            sum_p += row.sigma_at_max_length;
            break;
        case TransportLabel::vanishing:
            ++rep.vanishing;
            sum_v += row.sigma_at_max_length;
            break;
        case TransportLabel::indeterminate: ++rep.indeterminate; break;
        }
        if (row.classification.contradiction()) ++rep.contradictions;
    }
    if (rep.persistent) rep.mean_sigma_persistent = sum_p / static_cast<double>(rep.persistent);
    if (rep.vanishing) rep.mean_sigma_vanishing = sum_v / static_cast<double>(rep.vanishing);
    return rep;
}

std::vector<int> geometric_checkpoints(int lo, int hi, int count) {
    if (lo < 1 || hi < lo || count < 1) throw InputError("geometric_checkpoints: need 1 <= lo <= hi, count >= 1");
    if (count > hi - lo + 1) throw InputError("geometric_checkpoints: more points than integers in range");
    if (count == 1) return {hi};
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count));
    const double ratio = static_cast<double>(hi) / lo;
    for (int i = 0; i < count; ++i) {
        int v = static_cast<int>(std::lround(lo * std::pow(ratio, static_cast<double>(i) / (count - 1))));
        // keep room for the remaining points
        v = std::min(v, hi - (count - 1 - i));
        if (!out.empty()) v = std::max(v, out.back() + 1);
        out.push_back(v);
    }
    return out;
}

std::vector<int> arithmetic_checkpoints(int lo, int hi, int step) {
    if (lo < 1 || hi < lo || step < 1) throw InputError("arithmetic_checkpoints: need 1 <= lo <= hi, step >= 1");
    std::vector<int> out;
    for (int l = lo; l <= hi; l += step) out.push_back(l);
    return out;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 1) throw InputError("linear_grid: count must be >= 1");
    if (count == 1) return {0.5 * (lo + hi)};
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    return out;
}

} // namespace ebb
