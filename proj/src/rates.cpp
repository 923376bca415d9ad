#include "udw/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "udw/errors.hpp"
#include "udw/parallel.hpp"

namespace udw {

namespace {

constexpr double kPi = std::numbers::pi;

struct Extrapolated {
    double value = 0.0;
    double error = 0.0;
    double residual = 0.0;
    bool converged = true;
};

Extrapolated extrapolate_rate(const CorrelatorKernel& kernel, double omega, double tau, const QuadratureSpec& quad,
                              const EpsilonSchedule& eps) {
    std::vector<EpsilonSample> samples;
    IntegralEstimate finest;
    for (double e : eps.ladder()) {
        finest = rate_integral(kernel.with_epsilon(e), omega, tau, quad);
        samples.push_back({e, finest.value});
    }
    const ExtrapolationResult x = epsilon_extrapolate(samples, eps.extrapolation_order);
    return {x.value.real(), finest.error_bound + x.residual, x.residual, finest.converged};
}

}  // namespace

std::size_t RateSeries::flagged_count() const {
    return static_cast<std::size_t>(
        std::count_if(rates.begin(), rates.end(), [](const RateBreakdown& r) { return !r.converged; }));
}

IntegralEstimate rate_integral(const CorrelatorKernel& kernel, double omega, double tau, const QuadratureSpec& quad) {
    // Integrate W/κ² in x = κs so the truncation radius, pole widths and
    // tolerances are κ-normalized; the result comes out in units of κ.
    const double k = kernel.kappa();
    OscillatoryTail tail;
    for (PoleHint p : kernel.singular_lags(tau)) {
        p.location *= k;
        p.width *= k;
        if (p.location + 10 * p.width > 0) tail.poles.push_back(p);
    }
    auto g = [&](double x) { return kernel.at_lag(tau, x / k) / (k * k); };
    IntegralEstimate r = integrate_semi_infinite_oscillatory(g, omega / k, quad, tail);
    r.value = Complex(2.0 * r.value.real() * k, 0.0);
    r.error_bound *= 2.0 * k;
    return r;
}

RateBreakdown transition_rate(const SuperpositionConfig& config, double tau, const QuadratureSpec& quad,
                              const EpsilonSchedule& eps) {
    config.validate();
    eps.validate();
    const std::size_t n = config.size();
    const double omega = config.detector.omega;
    const double lam = config.detector.lambda;
    const double pref = lam * lam / static_cast<double>(n * n);

    RateBreakdown out;
    out.tau = tau;
    const Extrapolated loc = extrapolate_rate(CorrelatorKernel(config.scenario, 0, 0, eps.eps0), omega, tau, quad, eps);
    out.local = pref * static_cast<double>(n) * loc.value;
    out.error_bound = pref * static_cast<double>(n) * loc.error;
    out.extrapolation_residual = pref * loc.residual;
    out.converged = loc.converged;
    double residual_sum = pref * static_cast<double>(n) * loc.residual;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const Extrapolated t =
                extrapolate_rate(CorrelatorKernel(config.scenario, i, j, eps.eps0), omega, tau, quad, eps);
            out.interference += pref * t.value;
            out.error_bound += pref * t.error;
            out.extrapolation_residual = std::max(out.extrapolation_residual, pref * t.residual);
            residual_sum += pref * t.residual;
            out.converged = out.converged && t.converged;
        }
    out.total = out.local + out.interference;
    const double scale = std::max(std::abs(out.total), std::abs(out.local));
    if (residual_sum > kRateResidualTolerance * scale) out.converged = false;
    return out;
}

double thermal_rate_closed_form(double omega, double kappa, double L) {
    if (!(kappa > 0)) throw DomainError("kappa must be > 0");
    const double x = 2.0 * kPi * omega / kappa;
    // Ω/(e^{2πΩ/κ} - 1) -> κ/(2π) at Ω = 0.
    const double planck = (x == 0.0) ? kappa / (2.0 * kPi) : omega / std::expm1(x);
    const double y = omega * L;
    const double sinc = (y == 0.0) ? 1.0 : std::sin(y) / y;
    return planck / (4.0 * kPi) * (1.0 + sinc);
}

double single_detector_rate(double omega, double kappa, const QuadratureSpec& quad, const EpsilonSchedule& eps) {
    eps.validate();
    Scenario sc;
    sc.kind = ScenarioKind::ThermalMinkowski;
    sc.kappa = kappa;
    sc.separations = SeparationMatrix(1);
    const Extrapolated r = extrapolate_rate(CorrelatorKernel(sc, 0, 0, eps.eps0), omega, 0.0, quad, eps);
    return r.value;
}

RatioResult detailed_balance_ratio(const SuperpositionConfig& config, double omega, double tau,
                                   const QuadratureSpec& quad, const EpsilonSchedule& eps) {
    SuperpositionConfig up = config, down = config;
    up.detector.omega = omega;
    down.detector.omega = -omega;
    const RateBreakdown num = transition_rate(up, tau, quad, eps);
    const RateBreakdown den = transition_rate(down, tau, quad, eps);
    if (!(std::abs(den.total) > den.error_bound)) {
        std::ostringstream os;
        os.precision(17);
        os << "de-excitation rate " << den.total << " is not resolved from zero (error bound " << den.error_bound
           << ")";
        throw UndefinedRatio(os.str());
    }
    RatioResult r;
    r.value = num.total / den.total;
    const double rn = num.total != 0.0 ? num.error_bound / std::abs(num.total) : 0.0;
    const double rd = den.error_bound / std::abs(den.total);
    r.error_bound = std::abs(r.value) * (rn + rd);
    if (num.total == 0.0) r.error_bound = num.error_bound / std::abs(den.total);
    return r;
}

RateSeries rate_series(const SuperpositionConfig& config, const std::vector<double>& taus, const QuadratureSpec& quad,
                       const EpsilonSchedule& eps, int threads) {
    config.validate();
    for (std::size_t k = 1; k < taus.size(); ++k)
        if (!(taus[k] > taus[k - 1])) throw ContractViolation("series proper times must be strictly increasing");
    RateSeries s;
    s.taus = taus;
    s.config = config;
    s.rates.resize(taus.size());
    parallel_for(taus.size(), threads, [&](std::size_t k) {
        try {
            s.rates[k] = transition_rate(config, taus[k], quad, eps);
        } catch (const DomainError&) {
            RateBreakdown bad;
            bad.tau = taus[k];
            bad.local = bad.interference = bad.total = std::numeric_limits<double>::quiet_NaN();
            bad.converged = false;
            s.rates[k] = bad;
        }
    });
    return s;
}

std::vector<double> default_tau_grid(double omega) {
    if (omega == 0.0 || !std::isfinite(omega)) throw ContractViolation("default series grid needs a nonzero gap");
    constexpr int kOuter = 111, kInner = 178;
    std::vector<double> w;
    w.reserve(2 * kOuter + kInner);
    for (int k = 0; k < kOuter; ++k) w.push_back(-30.0 + 25.0 * k / kOuter);
    for (int k = 0; k < kInner; ++k) w.push_back(-5.0 + 10.0 * k / (kInner - 1));
    for (int k = 1; k <= kOuter; ++k) w.push_back(5.0 + 25.0 * k / kOuter);
    std::vector<double> taus;
    taus.reserve(w.size());
    for (double v : w) taus.push_back(v / omega);
    std::sort(taus.begin(), taus.end());
    return taus;
}

CriticalExpansion locate_critical_expansion(double omega, double L_kappa, const std::vector<double>& taus_over_omega,
                                            double lo, double hi, const QuadratureSpec& quad,
                                            const EpsilonSchedule& eps, int iterations, int threads) {
    if (!(omega > 0)) throw ContractViolation("critical expansion search needs omega > 0");
    if (!(hi > lo) || !(lo > 0)) throw ContractViolation("critical expansion bracket must satisfy 0 < lo < hi");
    auto min_rate = [&](double kappa_over_omega) {
        SuperpositionConfig c;
        c.scenario.kind = ScenarioKind::DeSitterComoving;
        c.scenario.kappa = kappa_over_omega * omega;
        c.scenario.separations = SeparationMatrix(2);
        c.scenario.separations.set_pair(0, 1, L_kappa / c.scenario.kappa);
        c.detector = {omega, 1.0};
        c.branches.assign(2, SwitchingProfile{});
        std::vector<double> taus;
        for (double v : taus_over_omega) taus.push_back(v / omega);
        EpsilonSchedule e = eps;
        e.eps0 = eps.eps0 / c.scenario.kappa;
        const RateSeries s = rate_series(c, taus, quad, e, threads);
        double m = std::numeric_limits<double>::infinity();
        for (const auto& r : s.rates) m = std::min(m, r.total);
        return m;
    };
    CriticalExpansion out;
    out.lo = lo;
    out.hi = hi;
    double flo = min_rate(lo), fhi = min_rate(hi);
    out.bracketed = flo < 0 && fhi >= 0;
    if (!out.bracketed) {
        out.kappa_over_omega = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    for (int k = 0; k < iterations; ++k) {
        const double mid = 0.5 * (out.lo + out.hi);
        const double fm = min_rate(mid);
        if (fm < 0)
            out.lo = mid;
        else
            out.hi = mid;
        ++out.iterations;
    }
    out.kappa_over_omega = 0.5 * (out.lo + out.hi);
    return out;
}

}  // namespace udw
