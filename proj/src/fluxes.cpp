#include "ebb/fluxes.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "ebb/errors.hpp"

namespace ebb {

SpectralDensities spectral_densities(Energy e, double transmission, const ThermoParams& thermo) {
    if (!(transmission >= 0.0 && transmission <= 1.0))
        throw InputError("transmission must lie in [0, 1]");
    SpectralDensities d;
    if (transmission == 0.0) return d;
    const double drho = fermi_density(e, thermo.beta_l, thermo.mu_l) - fermi_density(e, thermo.beta_r, thermo.mu_r);
    const double dxi = xi(e, thermo.beta_r, thermo.mu_r) - xi(e, thermo.beta_l, thermo.mu_l);
    d.j_l = transmission * drho;
    d.phi_l = d.j_l * e;
    d.j_r = -d.j_l;
    d.phi_r = -d.phi_l;
    d.sigma = transmission * dxi * drho;
    return d;
}

double entropy_from_fluxes(const SpectralDensities& d, const ThermoParams& thermo) {
    return -thermo.beta_l * (d.phi_l - thermo.mu_l * d.j_l) - thermo.beta_r * (d.phi_r - thermo.mu_r * d.j_r);
}

void SystemConfig::validate() const {
    sample.validate();
    ebb::validate(lead_l);
    ebb::validate(lead_r);
    thermo.validate();
    if (!(quadrature.tolerance > 0.0)) throw InputError("quadrature.tolerance must be > 0");
    if (!(quadrature.edge_margin >= 0.0)) throw InputError("quadrature.edge_margin must be >= 0");
    if (quadrature.max_evaluations < 15) throw InputError("quadrature.max_evaluations must be >= 15");
}

PointEvaluation evaluate_point(const PotentialValues& pot, int length, const LeadModel& lead_l,
                               const LeadModel& lead_r, const ThermoParams& thermo, Energy e) {
    PointEvaluation p;
    p.energy = e;
    p.self_energy = self_energies(lead_l, lead_r, e);
    if (!(p.self_energy.left.imag() > 0.0) && !(p.self_energy.right.imag() > 0.0)) {
        // no open channel on either side: nothing scatters, G is not needed
        p.green = CMat2{NAN, NAN, NAN, NAN};
        p.log_transmission = -std::numeric_limits<double>::infinity();
        p.densities = spectral_densities(e, 0.0, thermo);
        return p;
    }
    const DirectGreen direct = solve_coupled_green(pot, e, length, p.self_energy);
    if (!(direct.condition <= kMaxCondition))
        throw NumericalError("coupled sample system is ill-conditioned at E=" + std::to_string(e));
    p.green = direct.green;
    const double im_l = p.self_energy.left.imag();
    const double im_r = p.self_energy.right.imag();
    p.log_transmission = im_l > 0.0 && im_r > 0.0
                             ? std::log(4.0 * im_l * im_r) + 2.0 * direct.log_abs_g_lr
                             : -std::numeric_limits<double>::infinity();
    p.t = t_matrix(p.green, p.self_energy);
    p.unitarity_residual = unitarity_residual(p.t);
    p.transmission = transmission(p.t);
    p.densities = spectral_densities(e, p.transmission, thermo);
    return p;
}

FluxResult integrate_fluxes(const SystemConfig& config, int threads) {
    config.validate();
    FluxResult out;
    const auto window = sigma_intersection(config.lead_l, config.lead_r);
    if (window.shrink(config.quadrature.edge_margin).empty()) {
        out.no_open_channel = true;
        return out;
    }

    const int length = config.sample.length;
    QuadratureOptions opts = config.quadrature;
    const double resonance_width = std::numbers::pi / (length + 1);
    opts.max_initial_panel = opts.max_initial_panel > 0.0 ? std::min(opts.max_initial_panel, resonance_width)
                                                          : resonance_width;

    std::mutex stats_mutex;
    double max_residual = 0.0;
    double min_sigma = std::numeric_limits<double>::infinity();
    auto integrand = [&](double e) {
        const auto p = evaluate_point(config.sample.potential, length, config.lead_l, config.lead_r, config.thermo, e);
        {
            std::lock_guard lock(stats_mutex);
            max_residual = std::max(max_residual, p.unitarity_residual);
            min_sigma = std::min(min_sigma, p.densities.sigma);
        }
        return std::array<double, 3>{p.densities.phi_l, p.densities.j_l, p.densities.sigma};
    };

    const auto q = integrate_adaptive<3>(integrand, window, opts, threads);
    const double norm = 1.0 / (2.0 * std::numbers::pi);
    out.energy_flux_l = norm * q.value[0];
    out.charge_flux_l = norm * q.value[1];
    out.entropy_flux = norm * q.value[2];
    out.energy_flux_r = -out.energy_flux_l;
    out.charge_flux_r = -out.charge_flux_l;
    out.quadrature_error_estimate = norm * std::max({q.error[0], q.error[1], q.error[2]});
    out.evaluations = q.evaluations;
    out.panels = q.panels;
    out.converged = q.converged;
    out.max_unitarity_residual = max_residual;
    out.min_sigma_density = std::isfinite(min_sigma) ? min_sigma : 0.0;
    return out;
}

} // namespace ebb
