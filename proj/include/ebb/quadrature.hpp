#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ebb/leads.hpp"
#include "ebb/parallel.hpp"

namespace ebb {

struct QuadratureOptions {
    double tolerance = 1e-8;         // absolute, per component
    long max_evaluations = 2'000'000;
    double edge_margin = 1e-6;       // trimmed off both ends of every interval
    double max_initial_panel = 0.0;  // 0 = interval length
};

template <std::size_t N>
struct QuadratureResult {
    std::array<double, N> value{};
    std::array<double, N> error{};
    long evaluations = 0;
    std::size_t panels = 0;
    bool converged = true;
};

namespace detail {

// 15-point Kronrod rule with its embedded 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kKronrodNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel {
    double lo = 0, hi = 0;
    std::array<double, N> value{};
    std::array<double, N> error{};

    double worst() const { return *std::max_element(error.begin(), error.end()); }
};

template <std::size_t N, class F>
Panel<N> kronrod15(F& f, double lo, double hi) {
    Panel<N> p{lo, hi, {}, {}};
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::array<double, N> gauss{};
    for (std::size_t k = 0; k < 8; ++k) {
        const bool is_gauss = k % 2 == 1;
        const double wk = kKronrodWeights[k];
        const double wg = is_gauss ? kGaussWeights[k / 2] : 0.0;
        const int sides = k == 7 ? 1 : 2;
        for (int s = 0; s < sides; ++s) {
            const double x = s == 0 ? center + half * kKronrodNodes[k] : center - half * kKronrodNodes[k];
            const std::array<double, N> fx = f(x);
            for (std::size_t c = 0; c < N; ++c) {
                p.value[c] += wk * fx[c];
                gauss[c] += wg * fx[c];
            }
        }
    }
    for (std::size_t c = 0; c < N; ++c) {
        p.value[c] *= half;
        p.error[c] = std::abs(p.value[c] - gauss[c] * half);
    }
    return p;
}

} // namespace detail

// Globally adaptive Gauss-Kronrod integration of a vector-valued integrand
// over a union of intervals. The panel with the largest error is bisected
// until every component's summed error is within tolerance. Initial panels
// are evaluated in parallel; the result does not depend on `threads`.
template <std::size_t N, class F>
QuadratureResult<N> integrate_adaptive(F&& f, const EnergyWindow& window, const QuadratureOptions& opts,
                                       int threads = 1) {
    constexpr long kPerPanel = 15;
    QuadratureResult<N> out;

    std::vector<std::pair<double, double>> seeds;
    for (const auto& iv : window.shrink(opts.edge_margin).intervals) {
        const double len = iv.length();
        const double cap = opts.max_initial_panel > 0.0 ? std::min(len, opts.max_initial_panel) : len;
        const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(len / cap - 1e-12)));
        for (std::size_t i = 0; i < count; ++i) {
            const double a = iv.lo + len * static_cast<double>(i) / static_cast<double>(count);
            const double b = i + 1 == count ? iv.hi : iv.lo + len * static_cast<double>(i + 1) / static_cast<double>(count);
            seeds.emplace_back(a, b);
        }
    }
    if (seeds.empty()) return out;

    std::vector<detail::Panel<N>> panels(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t i) { panels[i] = detail::kronrod15<N>(f, seeds[i].first, seeds[i].second); });
    out.evaluations = kPerPanel * static_cast<long>(panels.size());

    // Max-heap on error; ties broken by position so refinement is deterministic.
    auto less = [](const detail::Panel<N>& x, const detail::Panel<N>& y) {
        const double ex = x.worst(), ey = y.worst();
        return ex != ey ? ex < ey : x.lo > y.lo;
    };
    std::vector<detail::Panel<N>> frozen; // too narrow to bisect further
    std::make_heap(panels.begin(), panels.end(), less);

    std::array<double, N> running{};
    for (const auto& p : panels)
        for (std::size_t c = 0; c < N; ++c) running[c] += p.error[c];

    while (true) {
        auto within = [&](const std::array<double, N>& e) {
            return std::all_of(e.begin(), e.end(), [&](double x) { return x <= opts.tolerance; });
        };
        if (within(running)) {
            // resum exactly; the running total drifts under repeated updates
            running = {};
            for (const auto* set : {&panels, &frozen})
                for (const auto& p : *set)
                    for (std::size_t c = 0; c < N; ++c) running[c] += p.error[c];
            if (within(running)) break;
        }
        if (panels.empty() || out.evaluations + 2 * kPerPanel > opts.max_evaluations) {
            out.converged = false;
            break;
        }
        std::pop_heap(panels.begin(), panels.end(), less);
        detail::Panel<N> worst = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(worst.lo < mid && mid < worst.hi) || worst.hi - worst.lo < 1e-13 * std::max(1.0, std::abs(mid))) {
            frozen.push_back(worst);
            continue;
        }
        std::array<detail::Panel<N>, 2> halves;
        const std::array<std::pair<double, double>, 2> bounds = {{{worst.lo, mid}, {mid, worst.hi}}};
        parallel_for(2, threads, [&](std::size_t i) { halves[i] = detail::kronrod15<N>(f, bounds[i].first, bounds[i].second); });
        out.evaluations += 2 * kPerPanel;
        for (std::size_t c = 0; c < N; ++c) running[c] += halves[0].error[c] + halves[1].error[c] - worst.error[c];
        for (auto& h : halves) {
            panels.push_back(h);
            std::push_heap(panels.begin(), panels.end(), less);
        }
    }

    panels.insert(panels.end(), frozen.begin(), frozen.end());
    std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
    for (const auto& p : panels)
        for (std::size_t c = 0; c < N; ++c) {
            out.value[c] += p.value[c];
            out.error[c] += p.error[c];
        }
    out.panels = panels.size();
    return out;
}

} // namespace ebb
