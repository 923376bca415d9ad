#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "udw/config.hpp"

namespace udw {

enum ExitStatus : int {
    kExitOk = 0,
    kExitRuntime = 1,
    kExitConfig = 2,
    kExitFlagged = 3,
    kExitOracleDisagree = 4,
};

struct RunOptions {
    int threads = 1;
    int oracle_resolution = 400;
    // Lower bound on the oracle's fixed ε, κ-normalized.
    double oracle_eps_floor_kappa = 1e-2;
};

// Rows of json scalars (numbers, strings, null for NaN); CSV and JSON both
// render from this.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
};

struct ResultRecord {
    std::string command;
    nlohmann::json inputs;
    Table table;
    nlohmann::json summary = nlohmann::json::object();
    nlohmann::json diagnostics = nlohmann::json::object();
    std::size_t flagged = 0;
    int status = kExitOk;
    std::string timestamp;

    nlohmann::json to_json() const;
    // to_json() without the timestamp: identical for identical inputs.
    std::string payload() const;
};

std::string format_number(double v);
std::string to_csv(const Table& t);

// command is one of prob, rate, ratio, series, grid.
ResultRecord run(const std::string& command, const ScenarioFile& file, const RunOptions& opts);

// Built-in parameter sets, κ = 1.
nlohmann::json figure_preset(const std::string& name);
std::vector<std::string> figure_names();

// overrides are key=value against the preset; keys not in the preset are
// rejected.
ResultRecord run_figure(const std::string& name, const std::vector<std::string>& overrides, const RunOptions& opts);

ResultRecord run_oracle(const ScenarioFile& file, const RunOptions& opts);

}  // namespace udw
