// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "udw/config.hpp"
#include "udw/correlators.hpp"
#include "udw/errors.hpp"
#include "udw/oracle.hpp"
#include "udw/rates.hpp"
#include "udw/response.hpp"
#include "udw/runner.hpp"

using namespace udw;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

SuperpositionConfig paths(ScenarioKind kind, double omega, std::vector<double> L,
                          std::vector<SwitchingProfile> br = {}) {
    std::size_t n = 1;
    while (n * (n - 1) / 2 < L.size()) ++n;
    SuperpositionConfig c;
    c.scenario.kind = kind;
    c.scenario.kappa = 1.0;
    c.scenario.separations = SeparationMatrix(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) c.scenario.separations.set_pair(i, j, L[k++]);
    c.detector = {omega, 1.0};
    c.branches = br.empty() ? std::vector<SwitchingProfile>(n) : br;
    return c;
}

const QuadratureSpec kRateQuad{1e-14, 1e-12, 20000, 40.0, 0.0};
const EpsilonSchedule kEps{};

const std::vector<double> kOmegas = {-2, -1, -0.5, 0.5, 1, 2};
const std::vector<double> kLs = {0.5, 1, 2, 5};

Outcome c1() {
    double worst = 0.0;
    for (double om : kOmegas)
        for (double L : kLs) {
            const RateBreakdown r = transition_rate(paths(ScenarioKind::ThermalMinkowski, om, {L}), 0.0, kRateQuad, kEps);
            const double cf = thermal_rate_closed_form(om, 1.0, L);
            worst = std::max(worst, std::abs(r.total - cf) / std::abs(cf));
        }
    return {worst <= 1e-3, "max relative error " + fmt("%.2e", worst) + " over 24 points (tol 1e-3, constant 1)"};
}

Outcome c2() {
    double worst = 0.0;
    for (double om : kOmegas)
        for (double L : kLs) {
            const RatioResult q =
                detailed_balance_ratio(paths(ScenarioKind::ThermalMinkowski, om, {L}), om, 0.0, kRateQuad, kEps);
            const double target = std::exp(-2 * kPi * om);
            worst = std::max(worst, std::abs(q.value - target) / target);
        }
    return {worst <= 1e-3, "max relative deviation from exp(-2 pi Omega/kappa) " + fmt("%.2e", worst) + " (tol 1e-3)"};
}

Outcome c3() {
    const double L = 1.0;
    std::mt19937 rng(20231);
    std::uniform_real_distribution<double> mag(0.5, 5.0);
    std::vector<double> s;
    while (s.size() < 50) {
        const double v = mag(rng);
        if (std::abs(v - L) < 0.3) continue;
        s.push_back(rng() % 2 ? v : -v);
    }
    const Scenario th = paths(ScenarioKind::ThermalMinkowski, 1.0, {L}).scenario;
    const Scenario ds = paths(ScenarioKind::DeSitterComoving, 1.0, {L}).scenario;
    const double r_loc = kms_periodicity_residual(CorrelatorKernel(th, 0, 0, 1e-3), s, 1.0);
    const double r_th = kms_periodicity_residual(CorrelatorKernel(th, 0, 1, 1e-3), s, 1.0);
    const CorrelatorKernel wds(ds, 0, 1, 1e-3);
    bool rejects = false;
    try {
        kms_periodicity_residual(wds, s, 1.0);
    } catch (const ContractViolation&) {
        rejects = true;
    }
    double magnitude = 0.0;
    for (double v : s) magnitude = std::max(magnitude, std::abs(wds.at_lag(0.0, v)));
    const double r_ds = kms_reference_residual(wds, s, 0.0);
    const bool ok = r_loc < 1e-8 && r_th < 1e-8 && rejects && r_ds > 1e-3 * magnitude;
    return {ok, "local " + fmt("%.1e", r_loc) + ", thermal nonlocal " + fmt("%.1e", r_th) + " (tol 1e-8); dS at p=0 " +
                    fmt("%.2e", r_ds / magnitude) + " of |W| (need > 1e-3)"};
}

Outcome c4() {
    const std::vector<double> sigmas = {0.1, 0.05, 0.025};
    std::vector<double> gap_t, gap_d, int_t, int_d;
    QuadratureSpec q;
    q.rel_tol = 1e-9;
    for (double sk : sigmas) {
        const double om = 1.0 / sk;  // Ωσ = 1
        const std::vector<SwitchingProfile> br = {{ProfileKind::Gaussian, sk, 0.0}, {ProfileKind::Gaussian, sk, 0.0}};
        const EpsilonSchedule e{1e-2 * sk, 0.5, 4, 2};
        for (auto kind : {ScenarioKind::ThermalMinkowski, ScenarioKind::DeSitterComoving}) {
            const ProbabilityBreakdown b = transition_probability(paths(kind, om, {0.5}, br), q, e);
            const ClosedFormGaussian cf = closed_form_gaussian(kind, 1.0, sk, om, 1.0, 0.5);
            const double g = std::abs(b.total - cf.P_total) / cf.P_total;
            const double gi = std::abs(b.interference_sum - (cf.P_total - 0.5 * cf.P_D)) /
                              std::abs(cf.P_total - 0.5 * cf.P_D);
            (kind == ScenarioKind::ThermalMinkowski ? gap_t : gap_d).push_back(g);
            (kind == ScenarioKind::ThermalMinkowski ? int_t : int_d).push_back(gi);
        }
    }
    auto monotone = [](const std::vector<double>& v) {
        for (std::size_t k = 1; k < v.size(); ++k)
            if (!(v[k] < v[k - 1])) return false;
        return true;
    };
    const bool ok = monotone(gap_t) && monotone(gap_d) && gap_t.back() <= 0.05 && gap_d.back() <= 0.05;
    std::string d = "total gaps T";
    for (double g : gap_t) d += " " + fmt("%.4f", g);
    d += ", dS";
    for (double g : gap_d) d += " " + fmt("%.4f", g);
    d += " (need decreasing, final <= 0.05); interference-only gaps T";
    for (double g : int_t) d += " " + fmt("%.4f", g);
    d += ", dS";
    for (double g : int_d) d += " " + fmt("%.4f", g);
    return {ok, d};
}

Outcome c5() {
    const auto c = paths(ScenarioKind::DeSitterComoving, 1.0, {1.0});
    const double F = single_detector_rate(1.0, 1.0, kRateQuad, kEps);
    const double early = transition_rate(c, -20.0, kRateQuad, kEps).total;
    const double late = transition_rate(c, 20.0, kRateQuad, kEps).total;
    const double de = std::abs(early - F) / F, dl = std::abs(late - 0.5 * F) / F;
    return {de <= 1e-3 && dl <= 1e-3,
            "|rate(-20)-F|/F " + fmt("%.1e", de) + ", |rate(+20)-F/2|/F " + fmt("%.1e", dl) + " (tol 1e-3)"};
}

Outcome c6() {
    auto series = [](double omega) {
        const auto c = paths(ScenarioKind::DeSitterComoving, omega, {1.0});
        return rate_series(c, default_tau_grid(omega), kRateQuad, kEps);
    };
    // slow expansion κ/Ω = 2, fast expansion κ/Ω = 10, Lκ = 1
    const RateSeries slow = series(0.5);
    const RateSeries fast = series(0.1);
    // contiguous negative runs; one must lie near τ = 0 (|Ωτ| <= 5)
    int runs = 0;
    bool near_zero = false;
    bool in_run = false;
    for (std::size_t k = 0; k < slow.taus.size(); ++k) {
        const bool neg = slow.rates[k].total < 0;
        if (neg && !in_run) ++runs;
        if (neg && std::abs(0.5 * slow.taus[k]) <= 5) near_zero = true;
        in_run = neg;
    }
    double area = 0.0;
    for (std::size_t k = 1; k < slow.taus.size(); ++k)
        area += 0.5 * (slow.rates[k].total + slow.rates[k - 1].total) * (slow.taus[k] - slow.taus[k - 1]);
    double fast_min = std::numeric_limits<double>::infinity();
    for (const auto& r : fast.rates) fast_min = std::min(fast_min, r.total);
    const bool ok = runs == 1 && near_zero && area >= 0 && fast_min >= 0;
    return {ok, "slow: " + std::to_string(runs) + " negative run(s), near tau=0 " + (near_zero ? "yes" : "no") +
                    ", trapezoid integral " + fmt("%.3e", area) + "; fast: min total " + fmt("%.3e", fast_min)};
}

// Plateaus: maximal runs of >= 5 consecutive points whose values stay within
// 2% of the run's first value; runs at levels within 5% of each other are
// merged.
std::vector<double> plateau_levels(const std::vector<double>& r) {
    std::vector<double> levels;
    std::size_t k = 0;
    while (k < r.size()) {
        std::size_t e = k + 1;
        while (e < r.size() && std::abs(r[e] - r[k]) <= 0.02 * std::abs(r[k])) ++e;
        if (e - k >= 5) {
            const double lvl = r[(k + e - 1) / 2];
            if (levels.empty() || std::abs(levels.back() - lvl) > 0.05 * std::abs(levels.back())) levels.push_back(lvl);
            k = e;
        } else {
            ++k;
        }
    }
    return levels;
}

Outcome c7() {
    const auto c = paths(ScenarioKind::DeSitterComoving, -10.0, {0.01, 20.0, 20.0});
    std::vector<double> taus = AxisRange{-12.0, 16.0, 141}.values();
    const RateSeries s = rate_series(c, taus, kRateQuad, kEps);
    const double F = single_detector_rate(-10.0, 1.0, kRateQuad, kEps);
    std::vector<double> r;
    for (const auto& b : s.rates) r.push_back(b.total / F);
    const auto levels = plateau_levels(r);
    const double terminal = r.back();
    const double dev = std::abs(terminal - 1.0 / 3.0) / (1.0 / 3.0);
    bool descending = true;
    for (std::size_t k = 1; k < levels.size(); ++k) descending = descending && levels[k] < levels[k - 1];
    const bool ok = levels.size() == 3 && descending && dev <= 1e-2;
    std::string d = "plateaus (rate/F):";
    for (double l : levels) d += " " + fmt("%.4f", l);
    d += " -> " + std::to_string(levels.empty() ? 0 : levels.size() - 1) + " steps; terminal " + fmt("%.5f", terminal) +
         ", rel dev from 1/3 " + fmt("%.1e", dev) + " (tol 1e-2)";
    return {ok, d};
}

Outcome c8() {
    QuadratureSpec q;
    q.rel_tol = 1e-9;
    const AxisRange om{-5.0, 5.0, 11}, t2{-3.0, 3.0, 25};
    bool part1 = true;
    std::string d = "L=1/2 top-decile lightlike:";
    for (auto kind : {ScenarioKind::ThermalMinkowski, ScenarioKind::DeSitterComoving, ScenarioKind::ParallelAccelerated}) {
        const Grid g = interference_grid_compact(kind, om, t2, 0.5, 0.1, q, kEps);
        std::vector<std::size_t> idx(g.values.size());
        for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return std::abs(g.values[a]) > std::abs(g.values[b]); });
        const std::size_t top = (idx.size() + 9) / 10;
        std::size_t inside = 0;
        for (std::size_t k = 0; k < top; ++k) inside += g.notes[idx[k]] == "lightlike_overlap";
        part1 = part1 && inside == top;
        d += " " + to_string(kind) + " " + std::to_string(inside) + "/" + std::to_string(top);
    }
    auto max_abs = [&](ScenarioKind kind) {
        const Grid g = interference_grid_compact(kind, om, t2, 1.5, 0.1, q, kEps);
        double m = 0.0;
        for (double v : g.values) m = std::max(m, std::abs(v));
        return m;
    };
    const double mt = max_abs(ScenarioKind::ThermalMinkowski);
    const double mp = max_abs(ScenarioKind::ParallelAccelerated);
    const bool part2 = mt >= 10 * mp;
    d += "; L=3/2 max|I| thermal " + fmt("%.3e", mt) + ", parallel " + fmt("%.3e", mp) + ", ratio " +
         fmt("%.2f", mt / mp) + " (need >= 10)";
    return {part1 && part2, d};
}

Outcome c9() {
    QuadratureSpec q;
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int agree = 0, total = 0;
    double worst_n1 = 0.0;
    for (auto kind : {ScenarioKind::ThermalMinkowski, ScenarioKind::DeSitterComoving, ScenarioKind::ParallelAccelerated}) {
        for (int k = 0; k < 10; ++k) {
            const std::size_t n = k % 2 == 0 ? 1 : 2;
            std::vector<SwitchingProfile> br;
            for (std::size_t b = 0; b < n; ++b)
                br.push_back({u(rng) < 0.5 ? ProfileKind::Gaussian : ProfileKind::CosineSquared, 0.4 + 0.6 * u(rng),
                              u(rng) - 0.5});
            std::vector<double> L;
            if (n == 2) L.push_back(0.2 + 2.0 * u(rng));
            const auto c = paths(kind, 4.0 * u(rng) - 2.0, L, br);
            const OracleReport rep = oracle_check(c, 1000, q, 1e-2);
            ++total;
            const bool ok = rep.status == OracleStatus::Agree && rep.deviation <= rep.combined_bound;
            agree += ok;
            if (n == 1) worst_n1 = std::max(worst_n1, rep.relative_deviation);
        }
    }
    return {agree == total && worst_n1 <= 1e-4, std::to_string(agree) + "/" + std::to_string(total) +
                                                     " agree within combined bounds; N=1 max rel dev " +
                                                     fmt("%.1e", worst_n1) + " (tol 1e-4)"};
}

Outcome c10() {
    QuadratureSpec q;
    // narrowband windows, σκ = 0.05 and Ωσ = 1
    const double sk = 0.05;
    const std::vector<SwitchingProfile> nb = {{ProfileKind::Gaussian, sk, 0.0}, {ProfileKind::Gaussian, sk, 0.0}};
    const EpsilonSchedule nb_eps{1e-2 * sk, 0.5, 4, 2};
    std::string d = "Lk=50, sigma*kappa=0.05 |P12|/P11:";
    bool decay = true;
    for (auto kind : {ScenarioKind::ThermalMinkowski, ScenarioKind::DeSitterComoving, ScenarioKind::ParallelAccelerated}) {
        const ProbabilityBreakdown b = transition_probability(paths(kind, 1.0 / sk, {50.0}, nb), q, nb_eps);
        const double r = std::abs(b.at(0, 1).value) / b.at(0, 0).value.real();
        decay = decay && r < 1e-3;
        d += " " + fmt("%.1e", r);
    }
    d += " (tol 1e-3)";
    {
        const ProbabilityBreakdown b = transition_probability(paths(ScenarioKind::ThermalMinkowski, 1.0, {50.0}), q, kEps);
        d += "; thermal at sigma*kappa=1 " + fmt("%.1e", std::abs(b.at(0, 1).value) / b.at(0, 0).value.real());
    }
    // thermal |P12| decreasing under L -> 2L
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double L : {2.0, 4.0, 8.0, 16.0}) {
        const double v = std::abs(transition_probability(paths(ScenarioKind::ThermalMinkowski, 1.0, {L}), q, kEps).at(0, 1).value);
        monotone = monotone && v < prev;
        prev = v;
    }
    d += "; thermal |P12| decreasing over L=2,4,8,16 " + std::string(monotone ? "yes" : "no");
    // λ quadrupling, Hermitian pairing, determinism
    const std::vector<SwitchingProfile> br = {{ProfileKind::Gaussian, 0.7, 0.0}, {ProfileKind::CosineSquared, 0.9, 0.4}};
    auto c1 = paths(ScenarioKind::DeSitterComoving, 0.8, {0.6}, br);
    auto c2 = c1;
    c2.detector.lambda = 2.0;
    const auto p1 = transition_probability(c1, q, kEps);
    const auto p2 = transition_probability(c2, q, kEps);
    const double quad_p = std::abs(p2.total / p1.total - 4.0);
    const double r1 = transition_rate(c1, 0.3, kRateQuad, kEps).total;
    const double r2 = transition_rate(c2, 0.3, kRateQuad, kEps).total;
    const double quad_r = std::abs(r2 / r1 - 4.0);
    const bool scaling = quad_p < 1e-12 && quad_r < 1e-12;

    bool herm = true;
    for (auto kind : {ScenarioKind::ThermalMinkowski, ScenarioKind::DeSitterComoving, ScenarioKind::ParallelAccelerated}) {
        const auto b = transition_probability(paths(kind, 0.8, {0.6}, br), q, kEps);
        herm = herm && b.hermiticity_defect <= b.error_bound;
    }

    const nlohmann::json doc = nlohmann::json::parse(R"({
      "schema_version": "1",
      "scenario": {"kind": "desitter_comoving", "separations": [{"pair": [1, 2], "L_kappa": 1.0}]},
      "detector": {"omega_over_kappa": 1.0},
      "branches": [{}, {}],
      "output": {"series": {"tau_kappa": {"min": -3, "max": 3, "points": 7}}}
    })");
    const ScenarioFile f = parse_config(doc);
    RunOptions one, many;
    many.threads = 4;
    const std::string a = run("series", f, one).payload();
    const bool det = a == run("series", f, one).payload() && a == run("series", f, many).payload() &&
                     a == run("series", parse_config(run("series", f, one).to_json()["inputs"]), one).payload();
    d += "; lambda^4 dev " + fmt("%.0e", std::max(quad_p, quad_r)) + "; hermitian " + (herm ? "yes" : "no") +
         "; deterministic " + (det ? "yes" : "no");
    return {decay && monotone && scaling && herm && det, d};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"C1 thermal rate closed form", c1},      {"C2 KMS detailed balance", c2},
        {"C3 KMS periodicity residuals", c3},     {"C4 saddle-point consistency", c4},
        {"C5 de Sitter equilibration", c5},       {"C6 negative-rate region", c6},
        {"C7 three-path equilibration", c7},      {"C8 causal-resonance localization", c8},
        {"C9 oracle equivalence", c9},            {"C10 decay and degeneracy", c10}};
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
