#include "udw/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "udw/errors.hpp"

namespace udw {

namespace {

// Relative oracle error above which the grid is declared too coarse.
constexpr double kInconclusiveRel = 1e-6;

}  // namespace

std::string to_string(OracleStatus status) {
    switch (status) {
        case OracleStatus::Agree: return "agree";
        case OracleStatus::Disagree: return "disagree";
        case OracleStatus::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

RiemannTerm riemann_probability_term(const SuperpositionConfig& config, std::size_t i, std::size_t j,
                                     double epsilon, int resolution) {
    if (resolution < 4 || resolution % 2 != 0) throw ContractViolation("oracle resolution must be even and >= 4");
    const std::size_t n = config.size();
    if (i >= n || j >= n) throw ContractViolation("branch index outside the configuration");
    const CorrelatorKernel kernel(config.scenario, i, j, epsilon);
    const double omega = config.detector.omega;
    const auto [a, b] = config.branches[i].support();
    const auto [c, d] = config.branches[j].support();
    const std::size_t m = static_cast<std::size_t>(resolution) + 1;
    const double h1 = (b - a) / resolution, h2 = (d - c) / resolution;

    std::vector<double> t1(m), t2(m);
    std::vector<Complex> x1(m), x2(m);
    for (std::size_t k = 0; k < m; ++k) {
        t1[k] = a + h1 * static_cast<double>(k);
        t2[k] = c + h2 * static_cast<double>(k);
        const double w1 = (k == 0 || k + 1 == m) ? 0.5 : 1.0;
        x1[k] = w1 * eval_chi(config.branches[i], t1[k], omega);
        x2[k] = w1 * std::conj(eval_chi(config.branches[j], t2[k], omega));
    }
    // The coarse sum keeps the even nodes; the halved grid doubles every
    // trapezoid weight, end weights included.
    Complex fine{0.0, 0.0}, coarse{0.0, 0.0};
    for (std::size_t k = 0; k < m; ++k) {
        if (x1[k] == Complex{0.0, 0.0}) continue;
        Complex row{0.0, 0.0}, row_coarse{0.0, 0.0};
        for (std::size_t l = 0; l < m; ++l) {
            if (x2[l] == Complex{0.0, 0.0}) continue;
            const Complex v = x2[l] * kernel(t1[k], t2[l]);
            row += v;
            if (l % 2 == 0) row_coarse += 2.0 * v;
        }
        fine += x1[k] * row;
        if (k % 2 == 0) coarse += 2.0 * x1[k] * row_coarse;
    }
    const double lam = config.detector.lambda;
    const double pref = lam * lam / static_cast<double>(n * n) * h1 * h2;
    RiemannTerm r;
    r.value = pref * fine;
    r.error = std::abs(pref * (fine - coarse));
    return r;
}

double oracle_epsilon(const SuperpositionConfig& config, int resolution, double eps_floor) {
    double h = 0.0;
    for (const auto& br : config.branches) {
        const auto [a, b] = br.support();
        h = std::max(h, (b - a) / resolution);
    }
    return std::max(eps_floor, 8.0 * h);
}

OracleReport oracle_check(const SuperpositionConfig& config, int resolution, const QuadratureSpec& quad,
                          double eps_floor) {
    config.validate();
    OracleReport rep;
    rep.resolution = resolution;
    rep.epsilon = oracle_epsilon(config, resolution, eps_floor);
    const ProbabilityBreakdown engine = transition_probability_at(config, rep.epsilon, quad);
    const std::size_t n = config.size();
    double oracle_err = 0.0, engine_err = 0.0, magnitude = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const RiemannTerm o = riemann_probability_term(config, i, j, rep.epsilon, resolution);
            const ProbabilityTerm& e = engine.at(i, j);
            OracleTermReport t;
            t.i = i;
            t.j = j;
            t.oracle = o.value;
            t.engine = e.value;
            t.oracle_error = o.error;
            t.engine_error = e.error_bound;
            t.deviation = std::abs(o.value - e.value);
            rep.oracle_total += o.value.real();
            oracle_err += o.error;
            engine_err += e.error_bound;
            magnitude += std::abs(o.value);
            rep.terms.push_back(t);
        }
    rep.engine_total = engine.total;
    rep.deviation = std::abs(rep.oracle_total - rep.engine_total);
    rep.relative_deviation =
        rep.oracle_total != 0.0 ? rep.deviation / std::abs(rep.oracle_total) : std::numeric_limits<double>::infinity();
    // Round-off of an (resolution+1)² term sum.
    const double roundoff = 1e-13 * magnitude;
    rep.combined_bound = oracle_err + engine_err + roundoff;
    if (oracle_err > kInconclusiveRel * std::abs(rep.oracle_total) + roundoff) {
        rep.status = OracleStatus::Inconclusive;
        rep.note = "grid too coarse: oracle self-consistency error exceeds the comparison tolerance";
    } else if (rep.deviation <= rep.combined_bound && engine.converged) {
        rep.status = OracleStatus::Agree;
    } else {
        rep.status = OracleStatus::Disagree;
        if (!engine.converged) rep.note = "engine reported non-convergence";
    }
    return rep;
}

}  // namespace udw
