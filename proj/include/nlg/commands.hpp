#pragma once

#include "nlg/catalog.hpp"
#include "nlg/report.hpp"
#include "nlg/robustness.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlg {

inline constexpr const char* kToolVersion = "nlg 1.0.0";
inline constexpr int kReportSchemaVersion = 1;

struct RunConfig {
    std::vector<std::string> games;  // empty: the command's default set
    std::vector<std::int64_t> n_res{1000};
    std::map<std::string, std::int64_t> n_res_override;  // game id -> budget
    double alpha = 0.05;
    EtaGrid eta_grid{0.0, 1.0, 0.01};
    CurveMode mode = CurveMode::exact();
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "nlg-out";
    std::filesystem::path config_dir = "nlg-configs";
    bool solve_missing = false;
    VertexSense sense = VertexSense::AtMost;

    void validate() const;
    std::int64_t budget(const std::string& game, std::int64_t n_res) const;
    OptConfigStore store() const;
};

struct BoundsRow {
    std::string game;
    double local_bound;
    double quantum_bound;
};

struct CommandOutput {
    std::vector<std::filesystem::path> files;
    std::string summary;  // human readable, printed by the CLI
};

std::vector<BoundsRow> compute_bounds(const RunConfig& cfg);
CommandOutput cmd_bounds(const RunConfig& cfg);
CommandOutput cmd_curves(const RunConfig& cfg);
CommandOutput cmd_table2(const RunConfig& cfg);
CommandOutput cmd_optimize(const RunConfig& cfg, double eta_prime);
CommandOutput cmd_tolerance(const RunConfig& cfg);
CommandOutput cmd_crossings(const RunConfig& cfg);

struct CrossingRow {
    std::string game;
    std::int64_t n_res;
    std::optional<double> kappa;
    std::optional<double> eta_dagger;
};

struct StabilityReport {
    std::vector<CrossingRow> rows;
    std::map<std::int64_t, bool> order_matches;  // per base N_res
    std::map<std::int64_t, int> crossed;          // games that cross, per base N_res
    std::optional<std::int64_t> onset;            // first N_res from which every order matches
};

inline constexpr double kOrderTieEps = 0.005;

StabilityReport compute_crossings(const RunConfig& cfg);

}  // namespace nlg
