#include "udw/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "udw/errors.hpp"
#include "udw/parallel.hpp"

namespace udw {

namespace {

constexpr double kPi = std::numbers::pi;

struct TermLadder {
    std::vector<EpsilonSample> samples;
    IntegralEstimate finest;
};

// Per-ε values of the requested ordered pairs, then the ε → 0 extrapolant
// of each pair.
std::vector<ProbabilityTerm> extrapolated_terms(const SuperpositionConfig& config, const QuadratureSpec& quad,
                                                const EpsilonSchedule& eps,
                                                const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    eps.validate();
    const auto ladder = eps.ladder();
    std::vector<TermLadder> work(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        for (double e : ladder) {
            IntegralEstimate r = probability_term(config, pairs[k].first, pairs[k].second, e, quad);
            work[k].samples.push_back({e, r.value});
            work[k].finest = r;
        }
    }
    std::vector<ProbabilityTerm> out(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const ExtrapolationResult x = epsilon_extrapolate(work[k].samples, eps.extrapolation_order);
        out[k].value = x.value;
        out[k].extrapolation_residual = x.residual;
        out[k].error_bound = work[k].finest.error_bound + x.residual;
        out[k].converged = work[k].finest.converged;
    }
    return out;
}

ProbabilityBreakdown assemble(std::size_t n, std::vector<ProbabilityTerm> terms) {
    ProbabilityBreakdown b;
    b.n = n;
    b.terms = std::move(terms);
    for (std::size_t i = 0; i < n; ++i) {
        const ProbabilityTerm& d = b.at(i, i);
        b.diagonal.push_back(d.value.real());
        b.total += d.value.real();
        b.error_bound += d.error_bound;
        b.converged = b.converged && d.converged;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const ProbabilityTerm& t = b.at(i, j);
            b.interference_sum += t.value.real();
            b.error_bound += t.error_bound;
            b.converged = b.converged && t.converged;
            if (i < j) b.hermiticity_defect = std::max(b.hermiticity_defect, std::abs(b.at(j, i).value - std::conj(t.value)));
        }
    }
    b.total += b.interference_sum;
    return b;
}

std::vector<std::pair<std::size_t, std::size_t>> all_pairs(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> p;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p.emplace_back(i, j);
    return p;
}

}  // namespace

std::vector<std::string> SuperpositionConfig::violations() const {
    std::vector<std::string> out = scenario.violations();
    if (branches.empty()) out.push_back("superposition needs at least one branch");
    if (scenario.separations.size() != branches.size()) {
        std::ostringstream os;
        os << "separation matrix covers " << scenario.separations.size() << " branches but " << branches.size()
           << " switching profiles are given";
        out.push_back(os.str());
    }
    for (std::size_t i = 0; i < branches.size(); ++i)
        for (auto& v : branches[i].violations()) out.push_back("branch " + std::to_string(i + 1) + ": " + v);
    if (!std::isfinite(detector.omega)) out.push_back("omega must be finite");
    if (!(detector.lambda > 0) || !std::isfinite(detector.lambda)) out.push_back("lambda must be finite and > 0");
    return out;
}

void SuperpositionConfig::validate() const {
    auto v = violations();
    if (!v.empty()) throw ConfigError(v);
}

IntegralEstimate probability_term(const SuperpositionConfig& config, std::size_t i, std::size_t j, double epsilon,
                                  const QuadratureSpec& quad) {
    const std::size_t n = config.size();
    if (i >= n || j >= n) throw ContractViolation("branch index outside the configuration");
    const CorrelatorKernel kernel(config.scenario, i, j, epsilon);
    const SwitchingProfile& pi = config.branches[i];
    const SwitchingProfile& pj = config.branches[j];
    const double omega = config.detector.omega;
    const double k = config.scenario.kappa;
    const auto [a, b] = pi.support();
    const auto [c, d] = pj.support();

    // Integrate over x = κτ, x' = κτ' with the dimensionless kernel W/κ², so
    // radii, panel widths and tolerances are κ-normalized and the integral is
    // the probability itself.
    QuadratureSpec spec = quad;
    spec.oscillation_hint = std::max(quad.oscillation_hint, std::abs(omega) / k);
    auto f = [&](double x, double xp) -> Complex {
        const Complex ci = eval_chi(pi, x / k, omega);
        if (ci == Complex{0.0, 0.0}) return {0.0, 0.0};
        const Complex cj = eval_chi(pj, xp / k, omega);
        if (cj == Complex{0.0, 0.0}) return {0.0, 0.0};
        return ci * std::conj(cj) * kernel(x / k, xp / k) / (k * k);
    };
    auto poles = [&](double x) {
        auto hints = kernel.singular_tau_prime(x / k);
        for (PoleHint& h : hints) {
            h.location *= k;
            h.width *= k;
        }
        return hints;
    };
    IntegralEstimate r = integrate_2d(f, k * a, k * b, k * c, k * d, spec, poles, spec.oscillation_hint);
    const double lam = config.detector.lambda;
    const double pref = lam * lam / static_cast<double>(n * n);
    r.value *= pref;
    r.error_bound *= pref;
    return r;
}

ProbabilityBreakdown transition_probability_at(const SuperpositionConfig& config, double epsilon,
                                               const QuadratureSpec& quad) {
    config.validate();
    const std::size_t n = config.size();
    std::vector<ProbabilityTerm> terms(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            IntegralEstimate r = probability_term(config, i, j, epsilon, quad);
            terms[i * n + j] = {r.value, r.error_bound, 0.0, r.converged};
        }
    return assemble(n, std::move(terms));
}

ProbabilityBreakdown transition_probability(const SuperpositionConfig& config, const QuadratureSpec& quad,
                                            const EpsilonSchedule& eps) {
    config.validate();
    const std::size_t n = config.size();
    return assemble(n, extrapolated_terms(config, quad, eps, all_pairs(n)));
}

ClosedFormGaussian closed_form_gaussian(ScenarioKind kind, double kappa, double sigma, double omega, double lambda,
                                        double L) {
    if (!(kappa > 0) || !(sigma > 0) || !(lambda > 0) || !(L > 0))
        throw DomainError("closed forms need kappa, sigma, lambda and L > 0");
    ClosedFormGaussian r;
    r.beta = kappa * sigma * sigma * omega;
    const double ks = kappa * sigma * lambda;
    r.F0 = ks * ks * std::exp(-sigma * sigma * omega * omega) / (16.0 * kPi);
    const double sb = std::sin(r.beta);
    if (std::abs(sb) < 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "closed-form P_D = 2F0/sin^2(beta) is singular at beta = " << r.beta;
        throw SingularFormula(os.str());
    }
    r.P_D = 2.0 * r.F0 / (sb * sb);
    const double a = 0.5 * kappa * L;
    switch (kind) {
        case ScenarioKind::ThermalMinkowski: {
            const Complex z(a, kappa * sigma * sigma * omega);
            r.P_total = 0.5 * r.P_D + (2.0 * r.F0 / (kappa * L)) * (1.0 / std::tanh(z)).real();
            break;
        }
        case ScenarioKind::DeSitterComoving:
        case ScenarioKind::ParallelAccelerated:
            r.P_total = 0.5 * r.P_D + r.F0 / (a * a + sb * sb);
            break;
    }
    return r;
}

std::vector<double> AxisRange::values() const {
    if (points < 1) throw ContractViolation("axis needs at least one point");
    std::vector<double> v(static_cast<std::size_t>(points));
    if (points == 1) {
        v[0] = min;
        return v;
    }
    for (int k = 0; k < points; ++k) v[static_cast<std::size_t>(k)] = min + (max - min) * k / (points - 1);
    return v;
}

std::size_t Grid::flagged_count() const {
    return static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), true));
}

Grid probability_difference_grid(const AxisRange& omega_over_kappa, const AxisRange& L_kappa, double sigma_kappa) {
    if (omega_over_kappa.points < 2 || L_kappa.points < 2)
        throw ContractViolation("difference grid needs at least 2 points per axis");
    if (!(omega_over_kappa.max > omega_over_kappa.min) || !(L_kappa.max > L_kappa.min))
        throw ContractViolation("grid ranges must have positive length");
    Grid g;
    g.x_name = "omega_over_kappa";
    g.y_name = "L_kappa";
    g.value_name = "dP_over_lambda2";
    g.x = omega_over_kappa.values();
    g.y = L_kappa.values();
    for (double om : g.x)
        for (double L : g.y) {
            try {
                const auto t = closed_form_gaussian(ScenarioKind::ThermalMinkowski, 1.0, sigma_kappa, om, 1.0, L);
                const auto d = closed_form_gaussian(ScenarioKind::DeSitterComoving, 1.0, sigma_kappa, om, 1.0, L);
                g.values.push_back(t.P_total - d.P_total);
                g.flagged.push_back(false);
                g.notes.emplace_back();
            } catch (const SingularFormula& e) {
                g.values.push_back(std::numeric_limits<double>::quiet_NaN());
                g.flagged.push_back(true);
                g.notes.emplace_back("singular_beta");
            }
            g.errors.push_back(0.0);
        }
    return g;
}

Grid interference_grid_compact(ScenarioKind kind, const AxisRange& omega_over_kappa, const AxisRange& tau2_kappa,
                               double L_kappa, double sigma_kappa, const QuadratureSpec& quad,
                               const EpsilonSchedule& eps, int threads) {
    Grid g;
    g.x_name = "omega_over_kappa";
    g.y_name = "tau2_kappa";
    g.value_name = "interference_over_lambda2";
    g.x = omega_over_kappa.values();
    g.y = tau2_kappa.values();
    const std::size_t ny = g.y.size();
    const std::size_t cells = g.x.size() * ny;
    g.values.assign(cells, 0.0);
    g.errors.assign(cells, 0.0);
    g.flagged.assign(cells, false);
    g.notes.assign(cells, "");
    parallel_for(cells, threads, [&](std::size_t k) {
        SuperpositionConfig c;
        c.scenario.kind = kind;
        c.scenario.kappa = 1.0;
        c.scenario.separations = SeparationMatrix(2);
        c.scenario.separations.set_pair(0, 1, L_kappa);
        c.detector = {g.x[k / ny], 1.0};
        c.branches = {{ProfileKind::CosineSquared, sigma_kappa, 0.0},
                      {ProfileKind::CosineSquared, sigma_kappa, g.y[k % ny]}};
        const CausalRelation rel = classify_causal(c.scenario, c.branches[0], c.branches[1], 0, 1);
        g.notes[k] = to_string(rel.value);
        try {
            // P_ij only; the diagonal does not enter the interference sum.
            auto terms = extrapolated_terms(c, quad, eps, {{0, 1}, {1, 0}});
            g.values[k] = terms[0].value.real() + terms[1].value.real();
            g.errors[k] = terms[0].error_bound + terms[1].error_bound;
            g.flagged[k] = !(terms[0].converged && terms[1].converged);
        } catch (const DomainError& e) {
            g.values[k] = std::numeric_limits<double>::quiet_NaN();
            g.flagged[k] = true;
            g.notes[k] += ";domain_error";
        }
    });
    return g;
}

}  // namespace udw
