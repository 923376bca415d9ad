#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "udw/correlators.hpp"
#include "udw/quadrature.hpp"
#include "udw/switching.hpp"

namespace udw {

struct DetectorParams {
    double omega = 1.0;
    double lambda = 1.0;
};

// Equal-weight superposition over N branches.
struct SuperpositionConfig {
    Scenario scenario;
    DetectorParams detector;
    std::vector<SwitchingProfile> branches;

    std::size_t size() const { return branches.size(); }
    std::vector<std::string> violations() const;
    void validate() const;
};

struct ProbabilityTerm {
    Complex value{0.0, 0.0};
    double error_bound = 0.0;
    double extrapolation_residual = 0.0;
    bool converged = true;
};

struct ProbabilityBreakdown {
    // N x N, row-major; diagonal entries are P_ii.
    std::vector<ProbabilityTerm> terms;
    std::size_t n = 0;
    std::vector<double> diagonal;
    double interference_sum = 0.0;
    double total = 0.0;
    double error_bound = 0.0;
    // max_{i<j} |P_ji - conj(P_ij)|
    double hermiticity_defect = 0.0;
    bool converged = true;

    const ProbabilityTerm& at(std::size_t i, std::size_t j) const { return terms.at(i * n + j); }
};

// (λ²/N²)∬ χ_i(τ) conj(χ_j(τ')) W^{ij}(τ,τ') dτ dτ' at one ε.
IntegralEstimate probability_term(const SuperpositionConfig& config, std::size_t i, std::size_t j,
                                  double epsilon, const QuadratureSpec& quad);

ProbabilityBreakdown transition_probability_at(const SuperpositionConfig& config, double epsilon,
                                               const QuadratureSpec& quad);

ProbabilityBreakdown transition_probability(const SuperpositionConfig& config, const QuadratureSpec& quad,
                                            const EpsilonSchedule& eps);

struct ClosedFormGaussian {
    double P_total = 0.0;
    double P_D = 0.0;
    double F0 = 0.0;
    double beta = 0.0;
};

// Narrowband Gaussian closed forms for two branches centred at τ = 0.
ClosedFormGaussian closed_form_gaussian(ScenarioKind kind, double kappa, double sigma, double omega,
                                        double lambda, double L);

struct AxisRange {
    double min = 0.0;
    double max = 1.0;
    int points = 2;

    std::vector<double> values() const;
};

struct Grid {
    std::string x_name, y_name, value_name;
    std::vector<double> x, y;
    // Row-major over (x, y): values[ix * y.size() + iy].
    std::vector<double> values;
    std::vector<double> errors;
    std::vector<bool> flagged;
    std::vector<std::string> notes;

    double at(std::size_t ix, std::size_t iy) const { return values.at(ix * y.size() + iy); }
    std::size_t flagged_count() const;
};

// (P_T - P_dS)/λ² over (Ω/κ, Lκ) from the closed forms, κ = 1.
Grid probability_difference_grid(const AxisRange& omega_over_kappa, const AxisRange& L_kappa, double sigma_kappa);

// Σ_{i≠j} P_ij/λ² for two cos² branches at τ₁ = 0 and τ₂ swept, κ = 1.
// notes carry classify_causal for each cell.
Grid interference_grid_compact(ScenarioKind kind, const AxisRange& omega_over_kappa, const AxisRange& tau2_kappa,
                               double L_kappa, double sigma_kappa, const QuadratureSpec& quad,
                               const EpsilonSchedule& eps, int threads = 1);

}  // namespace udw
