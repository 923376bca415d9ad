#include "udw/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <functional>
#include <sstream>

#include "udw/errors.hpp"

namespace udw {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kC = 1.0 / (16.0 * kPi * kPi);
// Above this |Re| the exponential forms replace the library sinh/coth.
constexpr double kDirectLimit = 20.0;
constexpr double kScaleLimit = 600.0;
const Complex kI{0.0, 1.0};

Complex inv_sinh_sq(Complex z) {
    if (std::abs(z.real()) < kDirectLimit) {
        const Complex sh = std::sinh(z);
        return 1.0 / (sh * sh);
    }
    if (z.real() < 0) z = -z;
    const Complex e = std::exp(-2.0 * z);
    const Complex d = 1.0 - e;
    return 4.0 * e / (d * d);
}

Complex coth(Complex z) {
    if (std::abs(z.real()) < kDirectLimit) return 1.0 / std::tanh(z);
    const double sign = z.real() < 0 ? -1.0 : 1.0;
    const Complex e = std::exp(-2.0 * sign * z);
    return sign * (1.0 + e) / (1.0 - e);
}

// Dimensionless kernels, κ = 1, with e = κε and a = κL.
Complex wd(Complex z, double e) { return -kC * inv_sinh_sq(0.5 * z - kI * e); }

Complex wt(Complex z, double a, double e) {
    return (kC / a) * (coth(0.5 * (a - z + kI * e)) + coth(0.5 * (a + z - kI * e)));
}

Complex wds(Complex P, Complex z, double a, double e) {
    if (a == 0.0) return wd(z, e);
    const Complex u = 0.5 * z - kI * e;
    const Complex logA = P + 2.0 * std::log(0.5 * a);
    const double M = std::max(logA.real(), 2.0 * std::abs(u.real()));
    if (M < kScaleLimit) {
        const Complex sh = std::sinh(u);
        return kC / (std::exp(logA) - sh * sh);
    }
    // e^{-M}·(A - sinh²u), every exponent kept below zero.
    const Complex ds = std::exp(logA - M) -
                       0.25 * (std::exp(2.0 * u - M) - 2.0 * std::exp(-M) + std::exp(-2.0 * u - M));
    return kC * std::exp(-M) / ds;
}

// c + (e^{x1} - e^{x2})/2 expressed as mantissa·e^{scale}.
struct Scaled {
    Complex mant;
    double scale;
};

Scaled scaled_factor(Complex c, Complex x1, Complex x2, double sign) {
    const double M = std::max({0.0, x1.real(), x2.real()});
    if (M < kScaleLimit)
        return {c + sign * 0.5 * (std::exp(x1) - std::exp(x2)), 0.0};
    return {c * std::exp(-M) + sign * 0.5 * (std::exp(x1 - M) - std::exp(x2 - M)), M};
}

Complex wp(Complex P, Complex z, double a, double e) {
    // f1 = a/2 + ie - e^{-P/2} sinh(z/2), f2 = a/2 - ie + e^{P/2} sinh(z/2).
    const Scaled f1 = scaled_factor(0.5 * a + kI * e, 0.5 * (z - P), 0.5 * (-z - P), -1.0);
    const Scaled f2 = scaled_factor(0.5 * a - kI * e, 0.5 * (z + P), 0.5 * (P - z), 1.0);
    const double scale = f1.scale + f2.scale;
    if (scale == 0.0) return kC / (f1.mant * f2.mant);
    return kC * std::exp(-scale) / (f1.mant * f2.mant);
}

void require_eps(double epsilon) {
    if (!(epsilon > 0) || !std::isfinite(epsilon))
        throw DomainError("regularization epsilon must be finite and > 0");
}

void require_kappa(double kappa) {
    if (!(kappa > 0) || !std::isfinite(kappa)) throw DomainError("kappa must be finite and > 0");
}

}  // namespace

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::ThermalMinkowski: return "thermal_minkowski";
        case ScenarioKind::DeSitterComoving: return "desitter_comoving";
        case ScenarioKind::ParallelAccelerated: return "parallel_accelerated";
    }
    return "unknown";
}

ScenarioKind scenario_kind_from_string(std::string_view name) {
    if (name == "thermal_minkowski") return ScenarioKind::ThermalMinkowski;
    if (name == "desitter_comoving") return ScenarioKind::DeSitterComoving;
    if (name == "parallel_accelerated") return ScenarioKind::ParallelAccelerated;
    throw ContractViolation("unsupported scenario kind '" + std::string(name) + "'");
}

std::vector<std::string> SeparationMatrix::violations() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n_; ++i) {
        if (at(i, i) != 0.0) out.push_back("separation L_" + std::to_string(i + 1) + "," + std::to_string(i + 1) + " must be 0");
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = at(i, j);
            if (i != j && (!std::isfinite(v) || v < 0.0))
                out.push_back("separation L_" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                              " must be finite and >= 0");
            if (i < j && at(i, j) != at(j, i)) {
                std::ostringstream os;
                os.precision(17);
                os << "separation matrix is not symmetric: L_" << i + 1 << "," << j + 1 << " = " << at(i, j)
                   << " but L_" << j + 1 << "," << i + 1 << " = " << at(j, i);
                out.push_back(os.str());
            }
        }
    }
    return out;
}

std::vector<std::string> Scenario::violations() const {
    std::vector<std::string> out;
    if (!(kappa > 0) || !std::isfinite(kappa)) out.push_back("kappa must be finite and > 0");
    if (separations.size() == 0) out.push_back("scenario needs at least one branch");
    for (auto& v : separations.violations()) out.push_back(v);
    return out;
}

void Scenario::validate() const {
    auto v = violations();
    if (!v.empty()) throw ConfigError(v);
}

Complex eval_local(double s, double kappa, double epsilon) {
    return eval_local_complex(Complex(s, 0.0), kappa, epsilon);
}

Complex eval_local_complex(Complex s, double kappa, double epsilon) {
    require_eps(epsilon);
    require_kappa(kappa);
    return kappa * kappa * wd(kappa * s, kappa * epsilon);
}

Complex eval_thermal_nonlocal(double s, double kappa, double L, double epsilon) {
    return eval_thermal_nonlocal_complex(Complex(s, 0.0), kappa, L, epsilon);
}

Complex eval_thermal_nonlocal_complex(Complex s, double kappa, double L, double epsilon) {
    require_eps(epsilon);
    require_kappa(kappa);
    if (!(L > 0) || !std::isfinite(L))
        throw DomainError("thermal nonlocal kernel needs L > 0; coincident branches use the local kernel");
    // The thermal displacement enters the coth arguments as κε/2 like every
    // other dimensionless slot.
    return kappa * kappa * wt(kappa * s, kappa * L, kappa * epsilon);
}

Complex eval_desitter_nonlocal(double p, double s, double kappa, double L, double epsilon) {
    return eval_desitter_nonlocal_complex(Complex(p, 0.0), Complex(s, 0.0), kappa, L, epsilon);
}

Complex eval_desitter_nonlocal_complex(Complex p, Complex s, double kappa, double L, double epsilon) {
    require_eps(epsilon);
    require_kappa(kappa);
    if (!(L >= 0) || !std::isfinite(L)) throw DomainError("de Sitter separation must be finite and >= 0");
    return kappa * kappa * wds(kappa * p, kappa * s, kappa * L, kappa * epsilon);
}

Complex eval_parallel_nonlocal(double p, double s, double kappa, double L, double epsilon) {
    require_eps(epsilon);
    require_kappa(kappa);
    if (!(L > 0) || !std::isfinite(L)) throw DomainError("parallel kernel needs L > 0");
    return kappa * kappa * wp(Complex(kappa * p, 0.0), Complex(kappa * s, 0.0), kappa * L, kappa * epsilon);
}

CorrelatorKernel::CorrelatorKernel(const Scenario& scenario, std::size_t i, std::size_t j, double epsilon)
    : kind_(scenario.kind), kappa_(scenario.kappa), L_(0.0), eps_(epsilon), i_(i), j_(j) {
    require_eps(epsilon);
    require_kappa(scenario.kappa);
    const std::size_t n = scenario.separations.size();
    if (i >= n || j >= n) throw ContractViolation("branch index outside the separation matrix");
    L_ = scenario.separations.at(std::min(i, j), std::max(i, j));
    local_ = (i == j) || L_ == 0.0;
    swapped_ = i > j;
}

CorrelatorKernel CorrelatorKernel::with_epsilon(double epsilon) const {
    require_eps(epsilon);
    CorrelatorKernel k = *this;
    k.eps_ = epsilon;
    return k;
}

bool CorrelatorKernel::stationary() const {
    return local_ || kind_ == ScenarioKind::ThermalMinkowski;
}

Complex CorrelatorKernel::base(double x, double xp) const {
    const double e = kappa_ * eps_;
    const Complex z(x - xp, 0.0);
    if (local_) return wd(z, e);
    const double a = kappa_ * L_;
    switch (kind_) {
        case ScenarioKind::ThermalMinkowski: return wt(z, a, e);
        case ScenarioKind::DeSitterComoving: return wds(Complex(x + xp, 0.0), z, a, e);
        case ScenarioKind::ParallelAccelerated: return wp(Complex(x + xp, 0.0), z, a, e);
    }
    throw ContractViolation("unsupported scenario kind");
}

Complex CorrelatorKernel::operator()(double tau, double tau_prime) const {
    const double x = kappa_ * tau, xp = kappa_ * tau_prime;
    const double k2 = kappa_ * kappa_;
    if (swapped_) return k2 * std::conj(base(xp, x));
    return k2 * base(x, xp);
}

std::vector<PoleHint> CorrelatorKernel::singular_tau_prime(double tau) const {
    const double x = kappa_ * tau;
    const double e = kappa_ * eps_;
    const double a = kappa_ * L_;
    std::vector<PoleHint> out;
    auto push = [&](double xp, double w) {
        if (std::isfinite(xp) && w > 0 && std::isfinite(w)) out.push_back({xp / kappa_, w / kappa_});
    };
    if (local_) {
        push(x, 2 * e);
        return out;
    }
    switch (kind_) {
        case ScenarioKind::ThermalMinkowski:
            push(x - a, e);
            push(x + a, e);
            break;
        case ScenarioKind::DeSitterComoving: {
            // e^{-x'} = e^{-x} ± a; symmetric in the branch order.
            auto width = [&](double xp) {
                const double s = x - xp;
                const double A = std::exp(x + xp) * 0.25 * a * a;
                const double d = std::abs(A + 0.5 * std::sinh(s));
                const double w = d > 0 ? std::abs(e * std::sinh(s)) / d : 2 * e;
                return std::clamp(w, 1e-3 * e, 1e3 * e);
            };
            const double plus = std::exp(-x) + a;
            push(-std::log(plus), width(-std::log(plus)));
            const double minus = std::exp(-x) - a;
            if (minus > 0) push(-std::log(minus), width(-std::log(minus)));
            break;
        }
        case ScenarioKind::ParallelAccelerated: {
            if (!swapped_) {
                const double xa = -std::log(std::exp(-x) + a);
                push(xa, 2 * e * std::exp(xa));
                const double xb = std::log(std::exp(x) + a);
                push(xb, 2 * e * std::exp(-xb));
            } else {
                const double ma = std::exp(-x) - a;
                if (ma > 0) {
                    const double xa = -std::log(ma);
                    push(xa, 2 * e * std::exp(xa));
                }
                const double mb = std::exp(x) - a;
                if (mb > 0) {
                    const double xb = std::log(mb);
                    push(xb, 2 * e * std::exp(-xb));
                }
            }
            break;
        }
    }
    return out;
}

std::vector<PoleHint> CorrelatorKernel::singular_lags(double tau) const {
    std::vector<PoleHint> out = singular_tau_prime(tau);
    for (PoleHint& p : out) p.location = tau - p.location;
    return out;
}

namespace {

std::vector<double> residual_at_ladder(const EpsilonSchedule& eps, std::span<const double> s_samples,
                                       const std::function<Complex(double, double)>& diff) {
    eps.validate();
    std::vector<double> out;
    const auto ladder = eps.ladder();
    for (double s : s_samples) {
        std::vector<EpsilonSample> samples;
        for (double ek : ladder) samples.push_back({ek, diff(s, ek)});
        out.push_back(std::abs(epsilon_extrapolate(samples, eps.extrapolation_order).value));
    }
    return out;
}

}  // namespace

double kms_periodicity_residual(const CorrelatorKernel& kernel, std::span<const double> s_samples, double kappa,
                                const EpsilonSchedule& eps) {
    if (!kernel.stationary())
        throw ContractViolation(
            "KMS periodicity residual needs a stationary kernel; " + to_string(kernel.kind()) +
            " nonlocal kernels depend on p (use kms_reference_residual)");
    require_kappa(kappa);
    const Complex shift(0.0, -2.0 * kPi / kappa);
    auto diff = [&](double s, double ek) -> Complex {
        if (kernel.is_local())
            return eval_local_complex(Complex(s, 0) + shift, kernel.kappa(), ek) -
                   eval_local_complex(Complex(-s, 0), kernel.kappa(), ek);
        return eval_thermal_nonlocal_complex(Complex(s, 0) + shift, kernel.kappa(), kernel.separation(), ek) -
               eval_thermal_nonlocal_complex(Complex(-s, 0), kernel.kappa(), kernel.separation(), ek);
    };
    auto r = residual_at_ladder(eps, s_samples, diff);
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

double kms_reference_residual(const CorrelatorKernel& kernel, std::span<const double> s_samples, double tau_ref,
                              const EpsilonSchedule& eps) {
    const double k = kernel.kappa();
    const double L = kernel.separation();
    const Complex shift(0.0, -2.0 * kPi / k);
    // g(s) = W(τ_ref, τ_ref - s), continued holomorphically in s.
    auto g = [&](Complex s, double ek) -> Complex {
        const Complex p = 2.0 * tau_ref - s;
        if (kernel.is_local()) return eval_local_complex(s, k, ek);
        switch (kernel.kind()) {
            case ScenarioKind::ThermalMinkowski: return eval_thermal_nonlocal_complex(s, k, L, ek);
            case ScenarioKind::DeSitterComoving: return eval_desitter_nonlocal_complex(p, s, k, L, ek);
            case ScenarioKind::ParallelAccelerated: {
                if (kernel.first() < kernel.second())
                    return k * k * wp(k * p, k * s, k * L, k * ek);
                // conj(W_P(p, -s)) continued off the real axis.
                return k * k * std::conj(wp(std::conj(k * p), std::conj(-k * s), k * L, k * ek));
            }
        }
        throw ContractViolation("unsupported scenario kind");
    };
    auto diff = [&](double s, double ek) { return g(Complex(s, 0) + shift, ek) - g(Complex(-s, 0), ek); };
    auto r = residual_at_ladder(eps, s_samples, diff);
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

}  // namespace udw
