#include "ebb/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "ebb/errors.hpp"
#include "ebb/validation.hpp"

namespace ebb {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// A JSON object plus its key path, for error messages.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw InputError("`" + path_ + "` must be an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        const std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto& [k, v] : node_.items())
            if (!ok.count(k)) throw InputError("unknown key `" + key(k) + "`");
    }

    bool has(const char* k) const { return node_.contains(k); }
    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    Section child(const char* k) const {
        if (!has(k)) throw InputError("missing section `" + key(k) + "`");
        return {node_.at(k), key(k)};
    }

    const json& raw(const char* k) const {
        if (!has(k)) throw InputError("missing key `" + key(k) + "`");
        return node_.at(k);
    }

    double number(const char* k) const {
        const json& v = raw(k);
        if (!v.is_number()) throw InputError("`" + key(k) + "` must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw InputError("`" + key(k) + "` must be finite");
        return x;
    }
    double number(const char* k, double fallback) const { return has(k) ? number(k) : fallback; }

    long long integer(const char* k) const {
        const json& v = raw(k);
        if (!v.is_number_integer()) throw InputError("`" + key(k) + "` must be an integer");
        return v.get<long long>();
    }
    long long integer(const char* k, long long fallback) const { return has(k) ? integer(k) : fallback; }

    std::uint64_t unsigned_integer(const char* k) const {
        const json& v = raw(k);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw InputError("`" + key(k) + "` must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

    bool boolean(const char* k, bool fallback) const {
        if (!has(k)) return fallback;
        const json& v = raw(k);
        if (!v.is_boolean()) throw InputError("`" + key(k) + "` must be true or false");
        return v.get<bool>();
    }

    std::string string(const char* k) const {
        const json& v = raw(k);
        if (!v.is_string()) throw InputError("`" + key(k) + "` must be a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const char* k) const {
        const json& v = raw(k);
        if (!v.is_array()) throw InputError("`" + key(k) + "` must be an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw InputError("`" + key(k) + "[" + std::to_string(i) + "]` must be a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::vector<int> integers(const char* k) const {
        const json& v = raw(k);
        if (!v.is_array()) throw InputError("`" + key(k) + "` must be an array of integers");
        std::vector<int> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_integer())
                throw InputError("`" + key(k) + "[" + std::to_string(i) + "]` must be an integer");
            out.push_back(v[i].get<int>());
        }
        return out;
    }

    const std::string& path() const { return path_; }

private:
    const json& node_;
    std::string path_;
};

fs::path resolve_path(const std::string& p, const fs::path& base) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

PotentialSpec parse_potential(const Section& s, const fs::path& base) {
    const std::string type = s.string("type");
    if (type == "zero") {
        s.allow({"type"});
        return potential::Zero{};
    }
    if (type == "constant") {
        s.allow({"type", "value"});
        return potential::Constant{s.number("value")};
    }
    if (type == "periodic") {
        s.allow({"type", "cell"});
        auto cell = s.numbers("cell");
        if (cell.empty()) throw InputError("`" + s.key("cell") + "` must be nonempty");
        return potential::Periodic{std::move(cell)};
    }
    if (type == "anderson") {
        s.allow({"type", "amplitude", "seed"});
        const double amplitude = s.number("amplitude");
        if (amplitude < 0.0) throw InputError("`" + s.key("amplitude") + "` must be >= 0");
        return potential::AndersonRandom{amplitude, s.unsigned_integer("seed")};
    }
    if (type == "almost_mathieu") {
        s.allow({"type", "coupling", "frequency", "phase"});
        return potential::AlmostMathieu{s.number("coupling"), s.number("frequency"), s.number("phase", 0.0)};
    }
    if (type == "file") {
        s.allow({"type", "path"});
        return potential::FromFile{resolve_path(s.string("path"), base)};
    }
    throw InputError("`" + s.key("type") + "` must be one of zero, constant, periodic, anderson, almost_mathieu, file");
}

LeadModel parse_lead(const Section& s, const fs::path& base) {
    const std::string type = s.string("type");
    if (type == "laplacian") {
        s.allow({"type", "hopping", "coupling"});
        lead::SemiInfiniteLaplacian p{s.number("hopping", 1.0), s.number("coupling", 1.0)};
        if (!(p.hopping > 0.0)) throw InputError("`" + s.key("hopping") + "` must be > 0");
        if (p.coupling == 0.0) throw InputError("`" + s.key("coupling") + "` must be nonzero");
        return p;
    }
    if (type == "table") {
        s.allow({"type", "path"});
        return read_lead_table(resolve_path(s.string("path"), base));
    }
    throw InputError("`" + s.key("type") + "` must be laplacian or table");
}

ThermoParams parse_thermo(const Section& s) {
    s.allow({"beta_l", "beta_r", "mu_l", "mu_r"});
    ThermoParams t{s.number("beta_l"), s.number("beta_r"), s.number("mu_l"), s.number("mu_r")};
    if (!(t.beta_l > 0.0)) throw InputError("`" + s.key("beta_l") + "` must be > 0");
    if (!(t.beta_r > 0.0)) throw InputError("`" + s.key("beta_r") + "` must be > 0");
    return t;
}

QuadratureOptions parse_quadrature(const Section& s) {
    s.allow({"tolerance", "max_evaluations", "edge_margin"});
    QuadratureOptions q;
    q.tolerance = s.number("tolerance", q.tolerance);
    q.max_evaluations = s.integer("max_evaluations", q.max_evaluations);
    q.edge_margin = s.number("edge_margin", q.edge_margin);
    if (!(q.tolerance > 0.0)) throw InputError("`" + s.key("tolerance") + "` must be > 0");
    if (q.max_evaluations < 15) throw InputError("`" + s.key("max_evaluations") + "` must be >= 15");
    if (q.edge_margin < 0.0) throw InputError("`" + s.key("edge_margin") + "` must be >= 0");
    return q;
}

CheckpointSpec parse_checkpoints(const Section& parent) {
    CheckpointSpec c;
    const json& raw = parent.raw("checkpoints");
    if (raw.is_array()) {
        c.spacing = "list";
        c.values = parent.integers("checkpoints");
        c.resolve();
        return c;
    }
    const Section s = parent.child("checkpoints");
    s.allow({"spacing", "min", "max", "count", "step"});
    c.spacing = s.has("spacing") ? s.string("spacing") : c.spacing;
    if (c.spacing != "geometric" && c.spacing != "arithmetic")
        throw InputError("`" + s.key("spacing") + "` must be geometric or arithmetic");
    c.min = static_cast<int>(s.integer("min", c.min));
    c.max = static_cast<int>(s.integer("max", c.max));
    c.count = static_cast<int>(s.integer("count", c.count));
    c.step = static_cast<int>(s.integer("step", c.step));
    try {
        c.resolve();
    } catch (const InputError& e) {
        throw InputError("`" + s.path() + "`: " + e.what());
    }
    return c;
}

ClassificationThresholds parse_thresholds(const Section& s) {
    s.allow({"sigma_slope", "sigma_min_r2", "persistent_ratio", "bounded_norm_slope", "diverging_norm_slope",
             "diverging_min_r2", "min_checkpoints", "min_span_ratio"});
    ClassificationThresholds t;
    t.sigma_slope = s.number("sigma_slope", t.sigma_slope);
    t.sigma_min_r2 = s.number("sigma_min_r2", t.sigma_min_r2);
    t.persistent_ratio = s.number("persistent_ratio", t.persistent_ratio);
    t.bounded_norm_slope = s.number("bounded_norm_slope", t.bounded_norm_slope);
    t.diverging_norm_slope = s.number("diverging_norm_slope", t.diverging_norm_slope);
    t.diverging_min_r2 = s.number("diverging_min_r2", t.diverging_min_r2);
    t.min_checkpoints = static_cast<std::size_t>(s.integer("min_checkpoints", static_cast<long long>(t.min_checkpoints)));
    t.min_span_ratio = s.number("min_span_ratio", t.min_span_ratio);
    return t;
}

SweepOptions parse_sweep(const Section& s) {
    s.allow({"energies", "energy_grid", "energy", "checkpoints", "thresholds", "abort_on_failure"});
    SweepOptions o;
    if (s.has("energies")) {
        o.grid.values = s.numbers("energies");
        if (o.grid.values.empty()) throw InputError("`" + s.key("energies") + "` must be nonempty");
    }
    if (s.has("energy_grid")) {
        if (s.has("energies")) throw InputError("`" + s.path() + "`: give either energies or energy_grid, not both");
        const Section g = s.child("energy_grid");
        g.allow({"min", "max", "points"});
        o.grid.min = g.number("min", o.grid.min);
        o.grid.max = g.number("max", o.grid.max);
        o.grid.points = static_cast<int>(g.integer("points", o.grid.points));
        if (o.grid.points < 1) throw InputError("`" + g.key("points") + "` must be >= 1");
        if (!(o.grid.max >= o.grid.min)) throw InputError("`" + g.path() + "`: max must be >= min");
    }
    o.energy = s.number("energy", o.energy);
    if (s.has("checkpoints")) o.checkpoints = parse_checkpoints(s);
    if (s.has("thresholds")) o.thresholds = parse_thresholds(s.child("thresholds"));
    o.abort_on_failure = s.boolean("abort_on_failure", o.abort_on_failure);
    return o;
}

json potential_json(const PotentialSpec& spec) {
    return std::visit(overloaded{
                          [](const potential::Zero&) { return json{{"type", "zero"}}; },
                          [](const potential::Constant& p) { return json{{"type", "constant"}, {"value", p.value}}; },
                          [](const potential::Periodic& p) { return json{{"type", "periodic"}, {"cell", p.cell}}; },
                          [](const potential::AndersonRandom& p) {
                              return json{{"type", "anderson"}, {"amplitude", p.amplitude}, {"seed", p.seed}};
                          },
                          [](const potential::AlmostMathieu& p) {
                              return json{{"type", "almost_mathieu"},
                                          {"coupling", p.coupling},
                                          {"frequency", p.frequency},
                                          {"phase", p.phase}};
                          },
                          [](const potential::FromFile& p) { return json{{"type", "file"}, {"path", p.path.string()}}; },
                      },
                      spec);
}

json lead_json(const LeadModel& lead) {
    return std::visit(overloaded{
                          [](const lead::SemiInfiniteLaplacian& p) {
                              return json{{"type", "laplacian"}, {"hopping", p.hopping}, {"coupling", p.coupling}};
                          },
                          [](const lead::Tabulated& t) { return json{{"type", "table"}, {"path", t.source}}; },
                      },
                      lead);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

json manifest(const std::string& command, const RunConfig* config, const std::string& started,
              double max_residual, const std::vector<std::string>& outputs) {
    json m;
    m["tool"] = "ebb";
    m["version"] = kToolVersion;
    m["command"] = command;
    if (config) {
        m["config"] = to_json(*config);
        m["seeds"] = config->seeds();
    } else {
        m["config"] = nullptr;
        m["seeds"] = json::array();
    }
    m["started_at"] = started;
    m["finished_at"] = utc_timestamp();
    m["max_unitarity_residual"] = max_residual;
    m["outputs"] = outputs;
    return m;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

constexpr double kUnitarityTolerance = 1e-10;

int run_fluxes(const RunConfig& config, const fs::path& out_dir, const RunOptions& options, std::ostream& log,
               const std::string& started) {
    const FluxResult r = integrate_fluxes(config.system(), options.threads);
    std::vector<std::string> problems;
    if (r.max_unitarity_residual >= kUnitarityTolerance) problems.push_back("unitarity residual above 1e-10");
    if (r.min_sigma_density < 0.0) problems.push_back("negative entropy density");
    if (r.entropy_flux < -r.quadrature_error_estimate) problems.push_back("entropy flux below -error estimate");
    if (!r.converged) problems.push_back("quadrature did not reach the requested tolerance");

    json j;
    j["energy_flux_l"] = r.energy_flux_l;
    j["charge_flux_l"] = r.charge_flux_l;
    j["entropy_flux"] = r.entropy_flux;
    j["quadrature_error_estimate"] = r.quadrature_error_estimate;
    j["evaluations"] = r.evaluations;
    j["no_open_channel"] = r.no_open_channel;
    j["details"] = {{"energy_flux_r", r.energy_flux_r},
                    {"charge_flux_r", r.charge_flux_r},
                    {"converged", r.converged},
                    {"panels", r.panels},
                    {"min_sigma_density", r.min_sigma_density},
                    {"problems", problems}};
    j["manifest"] = manifest("fluxes", &config, started, r.max_unitarity_residual, {"fluxes.json"});
    write_json(out_dir / "fluxes.json", j);
    log << "entropy_flux " << format_double(r.entropy_flux) << " +- " << format_double(r.quadrature_error_estimate)
        << " (" << r.evaluations << " evaluations)\n";
    for (const auto& p : problems) log << "invariant failure: " << p << '\n';
    return problems.empty() ? kExitOk : kExitInvariant;
}

int run_sweep_e(const RunConfig& config, const fs::path& out_dir, const RunOptions& options, std::ostream& log,
                const std::string& started) {
    const auto grid = config.sweep.grid.resolve();
    auto rows =
        energy_sweep(config.potential, config.length, config.lead_l, config.lead_r, config.thermo, grid, options.threads);

    double max_residual = 0.0;
    json failures = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::string error = r.error;
        if (r.ok) {
            max_residual = std::max(max_residual, r.unitarity_residual);
            if (r.unitarity_residual >= kUnitarityTolerance)
                error = "unitarity residual " + format_double(r.unitarity_residual);
        }
        if (error.empty()) continue;
        failures.push_back({{"E", r.energy}, {"error", error}});
        if (config.sweep.abort_on_failure) {
            // rows after the first failure are dropped from the output
            rows.resize(i + 1);
            break;
        }
    }
    {
        auto out = open_output(out_dir / "sweep_e.csv");
        write_sweep_e_csv(out, rows);
    }
    json j;
    j["points"] = rows.size();
    j["failures"] = failures;
    j["max_unitarity_residual"] = max_residual;
    j["manifest"] = manifest("sweep-e", &config, started, max_residual, {"sweep_e.csv", "sweep_e.json"});
    write_json(out_dir / "sweep_e.json", j);
    log << rows.size() << " energies, " << failures.size() << " failures, max unitarity residual "
        << format_double(max_residual) << '\n';
    return failures.empty() ? kExitOk : kExitInvariant;
}

json classification_json(const TransportClassification& c) {
    return {{"label", to_string(c.label)},
            {"norm_slope", c.norm_fit.slope},
            {"norm_r2", c.norm_fit.r2},
            {"sigma_slope", c.sigma_fit.slope},
            {"sigma_r2", c.sigma_fit.r2},
            {"min_over_median", c.min_over_median},
            {"max_length", c.max_length},
            {"contradiction", c.contradiction()}};
}

int run_sweep_l(const RunConfig& config, const fs::path& out_dir, const RunOptions& options, std::ostream& log,
                const std::string& started) {
    const auto checkpoints = config.sweep.checkpoints.resolve();
    const auto rows = l_sweep(config.potential, config.sweep.energy, config.lead_l, config.lead_r, config.thermo,
                              checkpoints, options.threads);
    double max_residual = 0.0;
    for (const auto& r : rows) max_residual = std::max(max_residual, r.unitarity_residual);
    {
        auto out = open_output(out_dir / "sweep_l.csv");
        write_sweep_l_csv(out, rows);
    }
    json j;
    j["energy"] = config.sweep.energy;
    j["checkpoints"] = checkpoints;
    j["log_sigma_density"] = json::array();
    for (const auto& r : rows) j["log_sigma_density"].push_back(r.log_sigma_density);
    if (rows.size() >= config.sweep.thresholds.min_checkpoints) {
        try {
            const auto c = classify_transport(rows, config.sweep.thresholds);
            j["classification"] = classification_json(c);
            log << "classification: " << to_string(c.label) << '\n';
        } catch (const InputError& e) {
            j["classification"] = nullptr;
            j["classification_error"] = e.what();
        }
    } else {
        j["classification"] = nullptr;
        j["classification_error"] = "too few checkpoints";
    }
    j["max_unitarity_residual"] = max_residual;
    j["manifest"] = manifest("sweep-l", &config, started, max_residual, {"sweep_l.csv", "sweep_l.json"});
    write_json(out_dir / "sweep_l.json", j);
    return max_residual < kUnitarityTolerance ? kExitOk : kExitInvariant;
}

int run_equivalence(const RunConfig& config, const fs::path& out_dir, const RunOptions& options, std::ostream& log,
                    const std::string& started) {
    const auto grid = config.sweep.grid.resolve();
    const auto checkpoints = config.sweep.checkpoints.resolve();
    const auto rep = equivalence_report(config.potential, config.lead_l, config.lead_r, config.thermo, grid,
                                        checkpoints, config.sweep.thresholds, options.threads);
    {
        auto out = open_output(out_dir / "equivalence.csv");
        out << "E,label,norm_slope,norm_r2,sigma_slope,sigma_r2,min_over_median,sigma_at_max_length,contradiction\n";
        for (const auto& row : rep.rows) {
            const auto& c = row.classification;
            out << format_double(row.energy) << ',' << to_string(c.label) << ',' << format_double(c.norm_fit.slope)
                << ',' << format_double(c.norm_fit.r2) << ',' << format_double(c.sigma_fit.slope) << ','
                << format_double(c.sigma_fit.r2) << ',' << format_double(c.min_over_median) << ','
                << format_double(row.sigma_at_max_length) << ',' << (c.contradiction() ? 1 : 0) << '\n';
        }
    }
    json j;
    j["max_length"] = rep.max_length;
    j["counts"] = {{"persistent", rep.persistent},
                   {"vanishing", rep.vanishing},
                   {"indeterminate", rep.indeterminate},
                   {"contradictions", rep.contradictions}};
    j["mean_sigma_persistent"] = rep.mean_sigma_persistent;
    j["mean_sigma_vanishing"] = rep.mean_sigma_vanishing;
    j["manifest"] =
        manifest("equivalence", &config, started, rep.max_unitarity_residual, {"equivalence.csv", "equivalence.json"});
    write_json(out_dir / "equivalence.json", j);
    log << rep.persistent << " persistent, " << rep.vanishing << " vanishing, " << rep.indeterminate
        << " indeterminate, " << rep.contradictions << " contradictions\n";
    const bool ok = rep.contradictions == 0 && rep.max_unitarity_residual < kUnitarityTolerance;
    return ok ? kExitOk : kExitInvariant;
}

} // namespace

std::vector<int> CheckpointSpec::resolve() const {
    std::vector<int> out;
    if (spacing == "list") {
        out = values;
        if (out.empty()) throw InputError("checkpoint list is empty");
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (out[i] < 1) throw InputError("checkpoints must be >= 1");
            if (i > 0 && out[i] <= out[i - 1]) throw InputError("checkpoints must be strictly increasing");
        }
        return out;
    }
    if (spacing == "arithmetic") return arithmetic_checkpoints(min, max, step);
    return geometric_checkpoints(min, max, count);
}

std::vector<double> EnergyGridSpec::resolve() const {
    if (!values.empty()) return values;
    return linear_grid(min, max, points);
}

SystemConfig RunConfig::system() const {
    SystemConfig s;
    s.sample.length = length;
    s.sample.potential = generate(potential, length);
    s.lead_l = lead_l;
    s.lead_r = lead_r;
    s.thermo = thermo;
    s.quadrature = quadrature;
    return s;
}

std::vector<std::uint64_t> RunConfig::seeds() const {
    if (const auto* a = std::get_if<potential::AndersonRandom>(&potential)) return {a->seed};
    return {};
}

RunConfig parse_config(const json& doc, const fs::path& base_dir) {
    const Section root(doc, "");
    root.allow({"sample", "lead_l", "lead_r", "thermo", "quadrature", "sweep"});
    RunConfig c;
    {
        const Section s = root.child("sample");
        s.allow({"length", "potential"});
        const long long length = s.integer("length");
        if (length < 1) throw InputError("`sample.length` must be >= 1");
        if (length > 100'000'000) throw InputError("`sample.length` is unreasonably large");
        c.length = static_cast<int>(length);
        c.potential = parse_potential(s.child("potential"), base_dir);
    }
    c.lead_l = parse_lead(root.child("lead_l"), base_dir);
    c.lead_r = parse_lead(root.child("lead_r"), base_dir);
    c.thermo = parse_thermo(root.child("thermo"));
    if (root.has("quadrature")) c.quadrature = parse_quadrature(root.child("quadrature"));
    if (root.has("sweep")) c.sweep = parse_sweep(root.child("sweep"));
    return c;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

json to_json(const RunConfig& c) {
    json j;
    j["sample"] = {{"length", c.length}, {"potential", potential_json(c.potential)}};
    j["lead_l"] = lead_json(c.lead_l);
    j["lead_r"] = lead_json(c.lead_r);
    j["thermo"] = {{"beta_l", c.thermo.beta_l}, {"beta_r", c.thermo.beta_r}, {"mu_l", c.thermo.mu_l}, {"mu_r", c.thermo.mu_r}};
    j["quadrature"] = {{"tolerance", c.quadrature.tolerance},
                       {"max_evaluations", c.quadrature.max_evaluations},
                       {"edge_margin", c.quadrature.edge_margin}};
    json sweep;
    if (!c.sweep.grid.values.empty())
        sweep["energies"] = c.sweep.grid.values;
    else
        sweep["energy_grid"] = {{"min", c.sweep.grid.min}, {"max", c.sweep.grid.max}, {"points", c.sweep.grid.points}};
    sweep["energy"] = c.sweep.energy;
    const auto& cp = c.sweep.checkpoints;
    if (cp.spacing == "list")
        sweep["checkpoints"] = cp.values;
    else if (cp.spacing == "arithmetic")
        sweep["checkpoints"] = {{"spacing", "arithmetic"}, {"min", cp.min}, {"max", cp.max}, {"step", cp.step}};
    else
        sweep["checkpoints"] = {{"spacing", "geometric"}, {"min", cp.min}, {"max", cp.max}, {"count", cp.count}};
    const auto& t = c.sweep.thresholds;
    sweep["thresholds"] = {{"sigma_slope", t.sigma_slope},
                           {"sigma_min_r2", t.sigma_min_r2},
                           {"persistent_ratio", t.persistent_ratio},
                           {"bounded_norm_slope", t.bounded_norm_slope},
                           {"diverging_norm_slope", t.diverging_norm_slope},
                           {"diverging_min_r2", t.diverging_min_r2},
                           {"min_checkpoints", t.min_checkpoints},
                           {"min_span_ratio", t.min_span_ratio}};
    sweep["abort_on_failure"] = c.sweep.abort_on_failure;
    j["sweep"] = sweep;
    return j;
}

void apply_seed_override(RunConfig& config, std::uint64_t seed) {
    if (auto* a = std::get_if<potential::AndersonRandom>(&config.potential)) a->seed = seed;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_sweep_e_csv(std::ostream& os, const std::vector<EnergyRecord>& rows) {
    os << "E,transmission,phi_l,j_l,sigma,unitarity_residual\n";
    const double nan = std::nan("");
    for (const auto& r : rows) {
        os << format_double(r.energy) << ',' << format_double(r.ok ? r.transmission : nan) << ','
           << format_double(r.ok ? r.densities.phi_l : nan) << ',' << format_double(r.ok ? r.densities.j_l : nan)
           << ',' << format_double(r.ok ? r.densities.sigma : nan) << ','
           << format_double(r.ok ? r.unitarity_residual : nan) << '\n';
    }
}

void write_sweep_l_csv(std::ostream& os, const std::vector<LSweepPoint>& rows) {
    os << "L,sigma_density,transmission,log_transfer_norm,resonance_flag\n";
    for (const auto& r : rows)
        os << r.length << ',' << format_double(r.sigma_density) << ',' << format_double(r.transmission) << ','
           << format_double(r.log_transfer_norm) << ',' << (r.resonance_flag ? 1 : 0) << '\n';
}

int run_validate(const RunConfig* config, const fs::path& out_dir, const RunOptions& options, std::ostream& log) {
    const std::string started = utc_timestamp();
    fs::create_directories(out_dir);
    std::vector<CheckResult> checks;
    if (config) {
        const SystemConfig sys = config->system();
        const auto grid = config->sweep.grid.resolve();
        checks = run_validation_suite(&sys, grid, options.threads);
    } else {
        checks = run_validation_suite(nullptr, {}, options.threads);
    }
    json j;
    j["checks"] = json::array();
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.passed;
        j["checks"].push_back(
            {{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}, {"detail", c.detail}});
        log << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << "  worst=" << format_double(c.value)
            << " threshold=" << format_double(c.threshold) << (c.detail.empty() ? "" : "  " + c.detail) << '\n';
    }
    j["passed"] = all;
    j["manifest"] = manifest("validate", config, started, 0.0, {"validate.json"});
    write_json(out_dir / "validate.json", j);
    return all ? kExitOk : kExitInvariant;
}

int run_command(const std::string& command, const RunConfig& config, const fs::path& out_dir,
                const RunOptions& options, std::ostream& log) {
    const std::string started = utc_timestamp();
    fs::create_directories(out_dir);
    if (command == "fluxes") return run_fluxes(config, out_dir, options, log, started);
    if (command == "sweep-e") return run_sweep_e(config, out_dir, options, log, started);
    if (command == "sweep-l") return run_sweep_l(config, out_dir, options, log, started);
    if (command == "equivalence") return run_equivalence(config, out_dir, options, log, started);
    if (command == "validate") return run_validate(&config, out_dir, options, log);
    throw InputError("unknown command `" + command + "`");
}

} // namespace ebb
