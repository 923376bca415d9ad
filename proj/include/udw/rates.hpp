#pragma once

#include <vector>

#include "udw/quadrature.hpp"
#include "udw/response.hpp"

namespace udw {

struct RateBreakdown {
    double local = 0.0;
    double interference = 0.0;
    double total = 0.0;
    double error_bound = 0.0;
    double tau = 0.0;
    // Largest ε-extrapolation residual among the contributing terms.
    double extrapolation_residual = 0.0;
    bool converged = true;
};

struct RateSeries {
    std::vector<double> taus;
    std::vector<RateBreakdown> rates;
    SuperpositionConfig config;

    std::size_t flagged_count() const;
};

// 2Re∫_0^∞ e^{-iΩs} W^{ij}(τ, τ-s) ds at one ε, without the λ²/N²
// prefactor.
IntegralEstimate rate_integral(const CorrelatorKernel& kernel, double omega, double tau, const QuadratureSpec& quad);

// Flag threshold for the ε-extrapolation residual of a rate, relative to
// max(|rate|, the single-detector rate at the same gap).
inline constexpr double kRateResidualTolerance = 1e-3;

RateBreakdown transition_rate(const SuperpositionConfig& config, double tau, const QuadratureSpec& quad,
                              const EpsilonSchedule& eps);

// (Ω/4π)(e^{2πΩ/κ} - 1)^{-1}(1 + sinc(ΩL)).
double thermal_rate_closed_form(double omega, double kappa, double L);

// Local rate of a detector on one path, per unit λ².
double single_detector_rate(double omega, double kappa, const QuadratureSpec& quad, const EpsilonSchedule& eps);

// single_detector_rate divided by the L → ∞ value of
// thermal_rate_closed_form.
inline constexpr double kSingleToClosedFormRatio = 2.0;

struct RatioResult {
    double value = 0.0;
    double error_bound = 0.0;
};

RatioResult detailed_balance_ratio(const SuperpositionConfig& config, double omega, double tau,
                                   const QuadratureSpec& quad, const EpsilonSchedule& eps);

RateSeries rate_series(const SuperpositionConfig& config, const std::vector<double>& taus,
                       const QuadratureSpec& quad, const EpsilonSchedule& eps, int threads = 1);

// 400 values of τ covering Ωτ ∈ [-30, 30], with four times the density in
// |Ωτ| < 5.
std::vector<double> default_tau_grid(double omega);

struct CriticalExpansion {
    double kappa_over_omega = 0.0;
    // Bracket [lo, hi] in κ/Ω after bisection.
    double lo = 0.0, hi = 0.0;
    int iterations = 0;
    bool bracketed = false;
};

// κ/Ω at which the minimum over the series τ-grid of the two-path de Sitter
// rate crosses zero, with Ω and Lκ held fixed. The series is sampled on
// taus_over_omega (values of Ωτ). Here eps.eps0 is read as κε, so the
// ladder follows κ as it is varied.
CriticalExpansion locate_critical_expansion(double omega, double L_kappa, const std::vector<double>& taus_over_omega,
                                            double lo, double hi, const QuadratureSpec& quad,
                                            const EpsilonSchedule& eps, int iterations = 12, int threads = 1);

}  // namespace udw
