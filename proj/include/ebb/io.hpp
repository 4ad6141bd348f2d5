#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebb/fluxes.hpp"
#include "ebb/scan.hpp"

namespace ebb {

inline constexpr const char* kToolVersion = "0.1.0";

struct CheckpointSpec {
    std::string spacing = "geometric"; // geometric | arithmetic | list
    int min = 10;
    int max = 2000;
    int count = 16; // geometric
    int step = 20;  // arithmetic
    std::vector<int> values; // list

    std::vector<int> resolve() const;
};

struct EnergyGridSpec {
    double min = -1.9;
    double max = 1.9;
    int points = 100;
    std::vector<double> values; // overrides min/max/points when nonempty

    std::vector<double> resolve() const;
};

struct SweepOptions {
    EnergyGridSpec grid;
    Energy energy = 0.5; // sweep-l
    CheckpointSpec checkpoints;
    ClassificationThresholds thresholds;
    bool abort_on_failure = false;
};

// Everything a run needs, with defaults applied.
struct RunConfig {
    int length = 1;
    PotentialSpec potential = potential::Zero{};
    LeadModel lead_l = lead::SemiInfiniteLaplacian{};
    LeadModel lead_r = lead::SemiInfiniteLaplacian{};
    ThermoParams thermo;
    QuadratureOptions quadrature;
    SweepOptions sweep;

    SystemConfig system() const;
    std::vector<std::uint64_t> seeds() const;
};

// Throws InputError with the JSON key path of the offending entry. Relative
// file paths are resolved against `base_dir`.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);

void apply_seed_override(RunConfig& config, std::uint64_t seed);

// Shortest round-trip representation; identical across runs.
std::string format_double(double x);

struct RunOptions {
    int threads = 1;
};

enum ExitCode : int { kExitOk = 0, kExitInvariant = 1, kExitConfig = 2 };

// Runs `fluxes`, `sweep-e`, `sweep-l`, `equivalence` or `validate`, writing
// CSV/JSON into out_dir. Returns the process exit code.
int run_command(const std::string& command, const RunConfig& config, const std::filesystem::path& out_dir,
                const RunOptions& options, std::ostream& log);

// Same as run_command but for `validate` without a user configuration.
int run_validate(const RunConfig* config, const std::filesystem::path& out_dir, const RunOptions& options,
                 std::ostream& log);

void write_sweep_e_csv(std::ostream& os, const std::vector<EnergyRecord>& rows);
void write_sweep_l_csv(std::ostream& os, const std::vector<LSweepPoint>& rows);

} // namespace ebb
