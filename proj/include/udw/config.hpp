#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "udw/quadrature.hpp"
#include "udw/response.hpp"

namespace udw {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kEngineVersion = "0.1.0";

struct GridSpec {
    // "interference": P_12 + P_21 over (omega_over_kappa, tau2_kappa) with
    // cos^2 windows of the file's scenario kind at fixed L_kappa.
    // "difference": closed-form P_T - P_dS over (omega_over_kappa, L_kappa_axis).
    std::string kind = "interference";
    AxisRange omega_over_kappa{-5.0, 5.0, 21};
    AxisRange tau2_kappa{-3.0, 3.0, 25};
    AxisRange L_kappa_axis{0.05, 5.0, 60};
    double sigma_kappa = 0.1;
    double L_kappa = 0.5;
};

struct ScenarioFile {
    std::string schema_version;
    SuperpositionConfig config;  // physical units
    QuadratureSpec quad;
    EpsilonSchedule eps;         // physical units (eps0 in time)
    std::string format = "csv";
    std::string path;
    double tau_kappa = 0.0;
    // Empty means the default 400-point Ωτ grid.
    std::optional<AxisRange> series_tau_kappa;
    GridSpec grid;
    // The input with every default filled in.
    nlohmann::json resolved;
};

// Parses and validates an already-loaded document. Every violation found is
// reported together in one ConfigError.
ScenarioFile parse_config(const nlohmann::json& doc);

// Reads path, applies the key=value overrides and validates.
ScenarioFile validate_config(const std::string& path, const std::vector<std::string>& overrides = {});

// key is a dotted path ("detector.omega_over_kappa", "branches.0.sigma_kappa");
// value is parsed as JSON when possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

}  // namespace udw
