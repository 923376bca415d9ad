#include "udw/switching.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "udw/errors.hpp"

namespace udw {

namespace {

struct Range {
    double lo, hi;
};

CausalRelation from_range(double L, Range d) {
    const double mid = 0.5 * (d.lo + d.hi);
    const double w = 0.5 * (d.hi - d.lo);
    CausalRelation r;
    r.margin = L - std::abs(mid);
    r.half_width = w;
    if (r.margin > w)
        r.value = CausalValue::Spacelike;
    else if (r.margin < -w)
        r.value = CausalValue::Timelike;
    else
        r.value = CausalValue::LightlikeOverlap;
    return r;
}

}  // namespace

std::string to_string(ProfileKind kind) {
    return kind == ProfileKind::Gaussian ? "gaussian" : "cosine_squared";
}

ProfileKind profile_kind_from_string(std::string_view name) {
    if (name == "gaussian") return ProfileKind::Gaussian;
    if (name == "cosine_squared") return ProfileKind::CosineSquared;
    throw ContractViolation("unsupported switching profile '" + std::string(name) + "'");
}

std::vector<std::string> SwitchingProfile::violations() const {
    std::vector<std::string> out;
    if (!(sigma > 0) || !std::isfinite(sigma)) out.push_back("switching sigma must be finite and > 0");
    if (!std::isfinite(center)) out.push_back("switching center must be finite");
    return out;
}

std::pair<double, double> SwitchingProfile::support(double gaussian_k) const {
    const double half = kind == ProfileKind::Gaussian ? gaussian_k * sigma : 0.5 * std::numbers::pi * sigma;
    return {center - half, center + half};
}

double eval_eta(const SwitchingProfile& profile, double tau) {
    const double x = (tau - profile.center) / profile.sigma;
    if (profile.kind == ProfileKind::Gaussian) return std::exp(-0.5 * x * x);
    if (!(std::abs(x) < 0.5 * std::numbers::pi)) return 0.0;
    const double c = std::cos(x);
    return c * c;
}

Complex eval_chi(const SwitchingProfile& profile, double tau, double omega) {
    const double eta = eval_eta(profile, tau);
    if (eta == 0.0) return {0.0, 0.0};
    return eta * Complex(std::cos(omega * tau), -std::sin(omega * tau));
}

std::string to_string(CausalValue value) {
    switch (value) {
        case CausalValue::Timelike: return "timelike";
        case CausalValue::LightlikeOverlap: return "lightlike_overlap";
        case CausalValue::Spacelike: return "spacelike";
    }
    return "unknown";
}

CausalRelation classify_causal(const Scenario& scenario, const SwitchingProfile& profile_i,
                               const SwitchingProfile& profile_j, std::size_t i, std::size_t j,
                               double gaussian_k) {
    const std::size_t n = scenario.separations.size();
    if (i >= n || j >= n) throw ContractViolation("branch index outside the separation matrix");
    const double L = scenario.separations.at(i, j);
    const double k = scenario.kappa;
    const auto [ai, bi] = profile_i.support(gaussian_k);
    const auto [aj, bj] = profile_j.support(gaussian_k);
    switch (scenario.kind) {
        case ScenarioKind::ThermalMinkowski:
            return from_range(L, {aj - bi, bj - ai});
        case ScenarioKind::DeSitterComoving: {
            auto eta = [k](double tau) { return -std::exp(-k * tau) / k; };
            return from_range(L, {eta(aj) - eta(bi), eta(bj) - eta(ai)});
        }
        case ScenarioKind::ParallelAccelerated: {
            // Worldlines (sinh κτ, cosh κτ)/κ and the same curve displaced by
            // L against the acceleration. The squared interval is
            // proportional to A·B with
            //   A = κL - (e^{-κτ'} - e^{-κτ}),  B = κL + e^{κτ} - e^{κτ'},
            // each monotone in τ and τ', so the extremes sit at the corners.
            double x0 = k * ai, x1 = k * bi, y0 = k * aj, y1 = k * bj;
            if (i > j) {
                std::swap(x0, y0);
                std::swap(x1, y1);
            }
            const double a = k * L;
            const Range A{a - std::exp(-y0) + std::exp(-x1), a - std::exp(-y1) + std::exp(-x0)};
            const Range B{a + std::exp(x0) - std::exp(y1), a + std::exp(x1) - std::exp(y0)};
            const Range& c = A.lo < B.lo ? A : B;
            CausalRelation r;
            r.margin = 0.5 * (c.lo + c.hi) / k;
            r.half_width = 0.5 * (c.hi - c.lo) / k;
            if (c.lo > 0)
                r.value = CausalValue::Spacelike;
            else if (c.hi < 0)
                r.value = CausalValue::Timelike;
            else
                r.value = CausalValue::LightlikeOverlap;
            return r;
        }
    }
    throw ContractViolation("unsupported scenario kind");
}

}  // namespace udw
