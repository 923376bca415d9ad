#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace udw {

using Complex = std::complex<double>;

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_refinements = 20000;
    // Semi-infinite and infinite domains are cut at this radius (in the
    // integration variable, which is kappa-normalized everywhere in udw).
    double truncation_radius = 40.0;
    double oscillation_hint = 0.0;

    void validate() const;
    // Largest panel width allowed by the oscillation hint (infinity if none).
    double max_panel_width() const;
};

struct EpsilonSchedule {
    double eps0 = 1e-2;
    double ratio = 0.5;
    int steps = 4;
    int extrapolation_order = 2;

    void validate() const;
    std::vector<double> ladder() const;
};

// Location of a near-axis singularity of the integrand: real part of the
// pole and its distance from the real axis.
struct PoleHint {
    double location = 0.0;
    double width = 0.0;
};

struct IntegralEstimate {
    Complex value{0.0, 0.0};
    double error_bound = 0.0;
    int refinements_used = 0;
    bool converged = true;
};

struct ExtrapolationResult {
    Complex value{0.0, 0.0};
    // |P_order(0) - P_{order-1}(0)| on the same smallest-ε samples.
    double residual = 0.0;
    int order = 0;
};

using Integrand1D = std::function<Complex(double)>;
using Integrand2D = std::function<Complex(double, double)>;
using PoleProvider = std::function<std::vector<PoleHint>(double)>;

// Either endpoint may be +-infinity; such ends are cut at
// +-truncation_radius.
IntegralEstimate integrate_1d(const Integrand1D& f, double a, double b,
                              const QuadratureSpec& spec,
                              std::span<const PoleHint> poles = {});

// Nested integration over [x0,x1] x [y0,y1]; the inner integral at fixed x
// is refined around inner_poles(x). The outer oscillation hint is taken from
// spec, the inner one from inner_oscillation.
IntegralEstimate integrate_2d(const Integrand2D& f, double x0, double x1,
                              double y0, double y1, const QuadratureSpec& spec,
                              const PoleProvider& inner_poles = {},
                              double inner_oscillation = -1.0,
                              std::span<const PoleHint> outer_poles = {});

struct OscillatoryTail {
    // Limit of g(s) as s -> infinity.
    Complex g_inf{0.0, 0.0};
    // Damping e^{-eta s} applied to the asymptote when its tail integral is
    // completed analytically.
    double convergence_factor = 0.0;
    std::vector<PoleHint> poles;
};

// ∫_0^∞ e^{-iΩs} g(s) ds. The integral is taken numerically up to
// max(truncation_radius, last pole + truncation_radius); past that point g is
// replaced by g_inf and integrated in closed form.
IntegralEstimate integrate_semi_infinite_oscillatory(const Integrand1D& g,
                                                     double omega,
                                                     const QuadratureSpec& spec,
                                                     const OscillatoryTail& tail = {});

struct EpsilonSample {
    double eps;
    Complex value;
};

// Polynomial extrapolation to ε = 0 through the order+1 smallest-ε samples.
ExtrapolationResult epsilon_extrapolate(std::span<const EpsilonSample> samples,
                                        int order);

}  // namespace udw
