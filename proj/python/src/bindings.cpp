#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ebb/errors.hpp"
#include "ebb/fluxes.hpp"
#include "ebb/io.hpp"
#include "ebb/scan.hpp"
#include "ebb/transfer.hpp"
#include "ebb/validation.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

// nlohmann::json <-> Python, via the builtin json module: the config
// schema is small and this keeps one parser in charge of validation.
json to_cpp(const py::object& obj) {
    const py::object dumps = py::module_::import("json").attr("dumps");
    return json::parse(dumps(obj).cast<std::string>());
}

py::object to_py(const json& j) {
    const py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

ebb::RunConfig config_from(const py::object& config, const std::string& base_dir) {
    return ebb::parse_config(to_cpp(config), base_dir);
}

json point_json(const ebb::PointEvaluation& p) {
    const auto c = [](std::complex<double> z) { return json::array({z.real(), z.imag()}); };
    return {{"E", p.energy},
            {"transmission", p.transmission},
            {"log_transmission", p.log_transmission},
            {"unitarity_residual", p.unitarity_residual},
            {"green", {{c(p.green.ll), c(p.green.lr)}, {c(p.green.rl), c(p.green.rr)}}},
            {"t", {{c(p.t.ll), c(p.t.lr)}, {c(p.t.rl), c(p.t.rr)}}},
            {"phi_l", p.densities.phi_l},
            {"j_l", p.densities.j_l},
            {"sigma", p.densities.sigma}};
}

json classification_json(const ebb::TransportClassification& c) {
    return {{"label", ebb::to_string(c.label)},   {"norm_slope", c.norm_fit.slope},
            {"norm_r2", c.norm_fit.r2},           {"sigma_slope", c.sigma_fit.slope},
            {"sigma_r2", c.sigma_fit.r2},         {"min_over_median", c.min_over_median},
            {"contradiction", c.contradiction()}};
}

} // namespace

PYBIND11_MODULE(_ebb, m) {
    m.doc() = "Two-terminal transport through a one-dimensional tight-binding sample";
    m.attr("__version__") = ebb::kToolVersion;

    py::register_exception<ebb::InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ebb::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ebb::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("resolve_config", [](const py::object& config, const std::string& base_dir) {
        return to_py(ebb::to_json(config_from(config, base_dir)));
    }, py::arg("config"), py::arg("base_dir") = ".", "Validate a config and return it with defaults applied.");

    m.def("generate_potential", [](const py::object& config, const std::string& base_dir) {
        const auto c = config_from(config, base_dir);
        return ebb::generate(c.potential, c.length).values;
    }, py::arg("config"), py::arg("base_dir") = ".", "v(0..L) for the config's sample.");

    m.def("fermi_density", &ebb::fermi_density, py::arg("E"), py::arg("beta"), py::arg("mu"));

    m.def("weiss", [](double hopping, double coupling, double e) {
        return ebb::weiss_boundary(ebb::lead::SemiInfiniteLaplacian{hopping, coupling}, e);
    }, py::arg("hopping"), py::arg("coupling"), py::arg("E"), "F(E + i0) of a semi-infinite chain lead.");

    m.def("transfer_product", [](const std::vector<double>& v, double e, int length) {
        const auto t = ebb::product(ebb::PotentialValues{v}, e, length).matrix;
        const auto n = t.normalized();
        py::dict out;
        out["normalized"] = std::vector<std::vector<double>>{{n.a, n.b}, {n.c, n.d}};
        out["log_scale"] = t.log_scale();
        out["log_norm"] = ebb::log_spectral_norm(t);
        out["determinant"] = t.determinant();
        return out;
    }, py::arg("potential"), py::arg("E"), py::arg("length"),
       "T_L(E) = exp(log_scale) * normalized, for potential values v(0..L).");

    m.def("evaluate", [](const py::object& config, double e, const std::string& base_dir) {
        const auto c = config_from(config, base_dir);
        const auto pot = ebb::generate(c.potential, c.length);
        return to_py(point_json(ebb::evaluate_point(pot, c.length, c.lead_l, c.lead_r, c.thermo, e)));
    }, py::arg("config"), py::arg("E"), py::arg("base_dir") = ".",
       "Coupled Green matrix, t-matrix, transmission and densities at one energy.");

    m.def("fluxes", [](const py::object& config, int threads, const std::string& base_dir) {
        const auto c = config_from(config, base_dir);
        ebb::FluxResult r;
        {
            py::gil_scoped_release release;
            r = ebb::integrate_fluxes(c.system(), threads);
        }
        return to_py({{"energy_flux_l", r.energy_flux_l},
                      {"energy_flux_r", r.energy_flux_r},
                      {"charge_flux_l", r.charge_flux_l},
                      {"charge_flux_r", r.charge_flux_r},
                      {"entropy_flux", r.entropy_flux},
                      {"quadrature_error_estimate", r.quadrature_error_estimate},
                      {"evaluations", r.evaluations},
                      {"converged", r.converged},
                      {"no_open_channel", r.no_open_channel},
                      {"max_unitarity_residual", r.max_unitarity_residual}});
    }, py::arg("config"), py::arg("threads") = 1, py::arg("base_dir") = ".");

    m.def("sweep_e", [](const py::object& config, int threads, const std::string& base_dir) {
        const auto c = config_from(config, base_dir);
        const auto grid = c.sweep.grid.resolve();
        std::vector<ebb::EnergyRecord> rows;
        {
            py::gil_scoped_release release;
            rows = ebb::energy_sweep(c.potential, c.length, c.lead_l, c.lead_r, c.thermo, grid, threads);
        }
        json out = json::array();
        for (const auto& r : rows)
            out.push_back({{"E", r.energy}, {"ok", r.ok}, {"error", r.error}, {"transmission", r.transmission},
                           {"phi_l", r.densities.phi_l}, {"j_l", r.densities.j_l}, {"sigma", r.densities.sigma},
                           {"unitarity_residual", r.unitarity_residual}});
        return to_py(out);
    }, py::arg("config"), py::arg("threads") = 1, py::arg("base_dir") = ".");

    m.def("sweep_l", [](const py::object& config, int threads, const std::string& base_dir) {
        const auto c = config_from(config, base_dir);
        const auto cps = c.sweep.checkpoints.resolve();
        std::vector<ebb::LSweepPoint> rows;
        {
            py::gil_scoped_release release;
            rows = ebb::l_sweep(c.potential, c.sweep.energy, c.lead_l, c.lead_r, c.thermo, cps, threads);
        }
        json points = json::array();
        for (const auto& p : rows)
            points.push_back({{"L", p.length}, {"sigma_density", p.sigma_density},
                              {"log_sigma_density", p.log_sigma_density}, {"transmission", p.transmission},
                              {"log_transfer_norm", p.log_transfer_norm}, {"resonance_flag", p.resonance_flag}});
        json out{{"points", points}};
        if (rows.size() >= c.sweep.thresholds.min_checkpoints)
            out["classification"] = classification_json(ebb::classify_transport(rows, c.sweep.thresholds));
        return to_py(out);
    }, py::arg("config"), py::arg("threads") = 1, py::arg("base_dir") = ".");

    m.def("equivalence", [](const py::object& config, int threads, const std::string& base_dir) {
        const auto c = config_from(config, base_dir);
        const auto grid = c.sweep.grid.resolve();
        const auto cps = c.sweep.checkpoints.resolve();
        ebb::EquivalenceReport rep;
        {
            py::gil_scoped_release release;
            rep = ebb::equivalence_report(c.potential, c.lead_l, c.lead_r, c.thermo, grid, cps, c.sweep.thresholds,
                                          threads);
        }
        json rows = json::array();
        for (const auto& r : rep.rows) {
            json row = classification_json(r.classification);
            row["E"] = r.energy;
            rows.push_back(row);
        }
        return to_py({{"rows", rows},
                      {"persistent", rep.persistent},
                      {"vanishing", rep.vanishing},
                      {"indeterminate", rep.indeterminate},
                      {"contradictions", rep.contradictions}});
    }, py::arg("config"), py::arg("threads") = 1, py::arg("base_dir") = ".");

    m.def("validate", [](const py::object& config, int threads, const std::string& base_dir) {
        std::vector<ebb::CheckResult> checks;
        if (config.is_none()) {
            py::gil_scoped_release release;
            checks = ebb::run_validation_suite(nullptr, {}, threads);
        } else {
            const auto c = config_from(config, base_dir);
            const auto sys = c.system();
            const auto grid = c.sweep.grid.resolve();
            py::gil_scoped_release release;
            checks = ebb::run_validation_suite(&sys, grid, threads);
        }
        json out = json::array();
        for (const auto& r : checks)
            out.push_back({{"name", r.name}, {"value", r.value}, {"threshold", r.threshold}, {"passed", r.passed},
                           {"detail", r.detail}});
        return to_py(out);
    }, py::arg("config") = py::none(), py::arg("threads") = 1, py::arg("base_dir") = ".",
       "Built-in invariant suite; list of checks with pass/fail.");

    m.def("run", [](const std::string& command, const std::string& config_path, const std::string& out_dir,
                    int threads) {
        std::ostringstream log;
        int rc;
        {
            py::gil_scoped_release release;
            const auto c = ebb::load_config(config_path);
            rc = ebb::run_command(command, c, out_dir, {threads}, log);
        }
        return py::make_tuple(rc, log.str());
    }, py::arg("command"), py::arg("config_path"), py::arg("out_dir"), py::arg("threads") = 1,
       "Same as the command-line tool; returns (exit code, log).");
}
