#include "udw/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <numbers>
#include <sstream>

#include "udw/errors.hpp"
#include "udw/oracle.hpp"
#include "udw/parallel.hpp"
#include "udw/rates.hpp"

namespace udw {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const char* quality(bool ok) { return ok ? "ok" : "flagged"; }

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json ladder_json(const EpsilonSchedule& eps, double kappa) {
    json l = json::array();
    for (double e : eps.ladder()) l.push_back(e * kappa);
    return l;
}

void finish(ResultRecord& r) {
    r.diagnostics["flagged_cells"] = r.flagged;
    r.status = r.flagged > 0 ? kExitFlagged : kExitOk;
    r.timestamp = utc_now();
}

SuperpositionConfig two_path(ScenarioKind kind, double omega, double L, double kappa = 1.0) {
    SuperpositionConfig c;
    c.scenario.kind = kind;
    c.scenario.kappa = kappa;
    c.scenario.separations = SeparationMatrix(2);
    c.scenario.separations.set_pair(0, 1, L);
    c.detector = {omega, 1.0};
    c.branches.assign(2, SwitchingProfile{});
    return c;
}

std::vector<double> as_doubles(const json& j) { return j.get<std::vector<double>>(); }

AxisRange as_axis(const json& j) { return {j.at("min").get<double>(), j.at("max").get<double>(), j.at("points").get<int>()}; }

// Numerics shared by all presets; κ = 1 so eps0 is κε.
struct PresetNumerics {
    QuadratureSpec quad;
    EpsilonSchedule eps;
};

PresetNumerics preset_numerics(const json& p) {
    const json& n = p.at("numerics");
    PresetNumerics out;
    out.quad.abs_tol = n.at("abs_tol").get<double>();
    out.quad.rel_tol = n.at("rel_tol").get<double>();
    out.quad.max_refinements = n.at("max_refinements").get<int>();
    out.quad.truncation_radius = n.at("truncation_radius_kappa").get<double>();
    out.eps.eps0 = n.at("eps0_kappa").get<double>();
    out.eps.ratio = n.at("eps_ratio").get<double>();
    out.eps.steps = n.at("eps_steps").get<int>();
    out.eps.extrapolation_order = n.at("extrapolation_order").get<int>();
    out.quad.validate();
    out.eps.validate();
    return out;
}

json default_numerics(double abs_tol, double rel_tol) {
    return {{"abs_tol", abs_tol},       {"rel_tol", rel_tol},     {"max_refinements", 20000},
            {"truncation_radius_kappa", 40.0}, {"eps0_kappa", 1e-2}, {"eps_ratio", 0.5},
            {"eps_steps", 4},           {"extrapolation_order", 2}};
}

void append_rate_row(ResultRecord& r, std::vector<json> lead, const RateBreakdown& b, double kappa, double single) {
    lead.push_back(num(b.local / kappa));
    lead.push_back(num(b.interference / kappa));
    lead.push_back(num(b.total / kappa));
    lead.push_back(num(b.error_bound / kappa));
    lead.push_back(num(b.extrapolation_residual / kappa));
    lead.push_back(num(b.total / single));
    lead.push_back(quality(b.converged));
    if (!b.converged) ++r.flagged;
    r.table.rows.push_back(std::move(lead));
}

const std::vector<std::string> kRateColumns = {
    "local_over_kappa",    "interference_over_kappa", "total_over_kappa", "error_bound_over_kappa",
    "ext_residual_over_kappa", "total_over_single",   "quality"};

std::vector<std::string> rate_columns(std::vector<std::string> lead) {
    lead.insert(lead.end(), kRateColumns.begin(), kRateColumns.end());
    return lead;
}

double single_rate(double omega, double kappa, double lambda, const QuadratureSpec& quad,
                   const EpsilonSchedule& eps) {
    return lambda * lambda * single_detector_rate(omega, kappa, quad, eps);
}

// ---- config-driven commands ----

ResultRecord run_prob(const ScenarioFile& f) {
    ResultRecord r;
    const ProbabilityBreakdown b = transition_probability(f.config, f.quad, f.eps);
    r.table.columns = {"term", "i", "j", "re", "im", "error_bound", "ext_residual", "quality"};
    for (std::size_t i = 0; i < b.n; ++i)
        for (std::size_t j = 0; j < b.n; ++j) {
            const ProbabilityTerm& t = b.at(i, j);
            r.table.rows.push_back({i == j ? "diagonal" : "interference", i + 1, j + 1, num(t.value.real()),
                                    num(t.value.imag()), num(t.error_bound), num(t.extrapolation_residual),
                                    quality(t.converged)});
            if (!t.converged) ++r.flagged;
        }
    r.table.rows.push_back({"total", "", "", num(b.total), 0.0, num(b.error_bound), "",
                            quality(b.converged)});
    r.summary = {{"total", num(b.total)},
                 {"diagonal", b.diagonal},
                 {"interference_sum", num(b.interference_sum)},
                 {"error_bound", num(b.error_bound)}};
    r.diagnostics["hermiticity_defect"] = num(b.hermiticity_defect);
    r.diagnostics["eps_ladder_kappa"] = ladder_json(f.eps, f.config.scenario.kappa);
    return r;
}

ResultRecord run_rate(const ScenarioFile& f) {
    ResultRecord r;
    const double k = f.config.scenario.kappa;
    const double tau = f.tau_kappa / k;
    const RateBreakdown b = transition_rate(f.config, tau, f.quad, f.eps);
    const double single = single_rate(f.config.detector.omega, k, f.config.detector.lambda, f.quad, f.eps);
    r.table.columns = rate_columns({"tau_kappa"});
    append_rate_row(r, {f.tau_kappa}, b, k, single);
    r.summary = {{"total_over_kappa", num(b.total / k)}, {"error_bound_over_kappa", num(b.error_bound / k)},
                 {"single_over_kappa", num(single / k)}};
    r.diagnostics["eps_ladder_kappa"] = ladder_json(f.eps, k);
    r.diagnostics["normalization"] = {{"thermal_closed_form_constant", 1.0},
                                      {"single_to_closed_form_ratio", kSingleToClosedFormRatio}};
    return r;
}

ResultRecord run_ratio(const ScenarioFile& f) {
    ResultRecord r;
    const double k = f.config.scenario.kappa;
    const double om = f.config.detector.omega;
    const RatioResult q = detailed_balance_ratio(f.config, om, f.tau_kappa / k, f.quad, f.eps);
    const double thermal = std::exp(-2.0 * kPi * om / k);
    const bool ok = std::isfinite(q.value);
    r.table.columns = {"omega_over_kappa", "tau_kappa", "ratio", "error_bound", "thermal_ratio", "quality"};
    r.table.rows.push_back({om / k, f.tau_kappa, num(q.value), num(q.error_bound), thermal, quality(ok)});
    if (!ok) ++r.flagged;
    r.summary = {{"ratio", num(q.value)}, {"error_bound", num(q.error_bound)}, {"thermal_ratio", thermal}};
    return r;
}

ResultRecord run_series(const ScenarioFile& f, const RunOptions& o) {
    ResultRecord r;
    const double k = f.config.scenario.kappa;
    const double om = f.config.detector.omega;
    std::vector<double> taus;
    if (f.series_tau_kappa) {
        for (double v : f.series_tau_kappa->values()) taus.push_back(v / k);
    } else {
        taus = default_tau_grid(om);
    }
    const RateSeries s = rate_series(f.config, taus, f.quad, f.eps, o.threads);
    const double single = single_rate(om, k, f.config.detector.lambda, f.quad, f.eps);
    r.table.columns = rate_columns({"tau_kappa", "omega_tau"});
    for (std::size_t i = 0; i < s.taus.size(); ++i)
        append_rate_row(r, {s.taus[i] * k, s.taus[i] * om}, s.rates[i], k, single);
    r.summary = {{"points", s.taus.size()}, {"single_over_kappa", num(single / k)}};
    r.diagnostics["eps_ladder_kappa"] = ladder_json(f.eps, k);
    return r;
}

ResultRecord emit_grid(const Grid& g, bool with_causal) {
    ResultRecord r;
    r.table.columns = {g.x_name, g.y_name, g.value_name, "error_bound"};
    if (with_causal) r.table.columns.push_back("causal");
    r.table.columns.push_back("quality");
    for (std::size_t ix = 0; ix < g.x.size(); ++ix)
        for (std::size_t iy = 0; iy < g.y.size(); ++iy) {
            const std::size_t k = ix * g.y.size() + iy;
            std::vector<json> row = {g.x[ix], g.y[iy], num(g.values[k]), num(g.errors[k])};
            if (with_causal) row.push_back(g.notes[k]);
            row.push_back(quality(!g.flagged[k]));
            r.table.rows.push_back(std::move(row));
        }
    r.flagged = g.flagged_count();
    return r;
}

ResultRecord run_grid(const ScenarioFile& f, const RunOptions& o) {
    const GridSpec& g = f.grid;
    if (g.kind == "difference") {
        ResultRecord r = emit_grid(probability_difference_grid(g.omega_over_kappa, g.L_kappa_axis, g.sigma_kappa), false);
        r.summary = {{"sigma_kappa", g.sigma_kappa}};
        return r;
    }
    EpsilonSchedule e = f.eps;
    e.eps0 *= f.config.scenario.kappa;  // the grid runs at κ = 1
    ResultRecord r = emit_grid(interference_grid_compact(f.config.scenario.kind, g.omega_over_kappa, g.tau2_kappa,
                                                         g.L_kappa, g.sigma_kappa, f.quad, e, o.threads),
                               true);
    r.summary = {{"kind", to_string(f.config.scenario.kind)}, {"sigma_kappa", g.sigma_kappa}, {"L_kappa", g.L_kappa}};
    return r;
}

// ---- figures ----

ResultRecord fig1(const json& p, const RunOptions&) {
    ResultRecord r;
    r.table.columns = {"inv_sigma_kappa", "omega_over_kappa", "L_kappa", "dP_over_lambda2", "quality"};
    const AxisRange om = as_axis(p.at("omega_over_kappa")), L = as_axis(p.at("L_kappa"));
    json peaks = json::array();
    for (double inv : as_doubles(p.at("inv_sigma_kappa"))) {
        if (!(inv > 0)) throw ContractViolation("fig1: inv_sigma_kappa must be > 0");
        const Grid g = probability_difference_grid(om, L, 1.0 / inv);
        double best = -1.0, best_om = 0.0;
        for (std::size_t ix = 0; ix < g.x.size(); ++ix)
            for (std::size_t iy = 0; iy < g.y.size(); ++iy) {
                const std::size_t k = ix * g.y.size() + iy;
                r.table.rows.push_back({inv, g.x[ix], g.y[iy], num(g.values[k]), quality(!g.flagged[k])});
                if (std::isfinite(g.values[k]) && std::abs(g.values[k]) > best) {
                    best = std::abs(g.values[k]);
                    best_om = g.x[ix];
                }
            }
        r.flagged += g.flagged_count();
        peaks.push_back({{"inv_sigma_kappa", inv}, {"max_abs_value", best}, {"omega_over_kappa_at_max", best_om}});
    }
    r.summary = {{"peaks", peaks}};
    return r;
}

ResultRecord fig3(const json& p, const RunOptions& o) {
    const PresetNumerics n = preset_numerics(p);
    ResultRecord r;
    r.table.columns = {"kind", "L_kappa", "omega_over_kappa", "tau2_kappa", "interference_over_lambda2",
                       "error_bound", "causal", "quality"};
    const AxisRange om = as_axis(p.at("omega_over_kappa")), t2 = as_axis(p.at("tau2_kappa"));
    const double sk = p.at("sigma_kappa").get<double>();
    json maxima = json::array();
    for (const auto& kn : p.at("kinds")) {
        const ScenarioKind kind = scenario_kind_from_string(kn.get<std::string>());
        for (double L : as_doubles(p.at("L_kappa"))) {
            const Grid g = interference_grid_compact(kind, om, t2, L, sk, n.quad, n.eps, o.threads);
            double best = 0.0;
            for (std::size_t ix = 0; ix < g.x.size(); ++ix)
                for (std::size_t iy = 0; iy < g.y.size(); ++iy) {
                    const std::size_t k = ix * g.y.size() + iy;
                    r.table.rows.push_back({to_string(kind), L, g.x[ix], g.y[iy], num(g.values[k]), num(g.errors[k]),
                                            g.notes[k], quality(!g.flagged[k])});
                    if (std::isfinite(g.values[k])) best = std::max(best, std::abs(g.values[k]));
                }
            r.flagged += g.flagged_count();
            maxima.push_back({{"kind", to_string(kind)}, {"L_kappa", L}, {"max_abs_interference", best}});
        }
    }
    r.summary = {{"maxima", maxima}};
    return r;
}

ResultRecord fig4(const json& p, const RunOptions& o) {
    const PresetNumerics n = preset_numerics(p);
    ResultRecord r;
    r.table.columns = rate_columns({"L_kappa", "omega_over_kappa", "closed_form_over_kappa"});
    const std::vector<double> Ls = as_doubles(p.at("L_kappa"));
    const std::vector<double> oms = as_axis(p.at("omega_over_kappa")).values();
    std::vector<RateBreakdown> out(Ls.size() * oms.size());
    std::vector<double> singles(oms.size());
    parallel_for(out.size(), o.threads, [&](std::size_t k) {
        const double om = oms[k % oms.size()];
        out[k] = transition_rate(two_path(ScenarioKind::ThermalMinkowski, om, Ls[k / oms.size()]), 0.0, n.quad, n.eps);
    });
    parallel_for(oms.size(), o.threads, [&](std::size_t k) { singles[k] = single_rate(oms[k], 1.0, 1.0, n.quad, n.eps); });
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double L = Ls[k / oms.size()], om = oms[k % oms.size()];
        append_rate_row(r, {L, om, thermal_rate_closed_form(om, 1.0, L)}, out[k], 1.0, singles[k % oms.size()]);
    }
    // sinc(ΩL) with Ω/κ = π vanishes for integer Lκ: every curve passes
    // through half the single-path rate there.
    json crossing = json::array();
    const double single_pi = single_rate(kPi, 1.0, 1.0, n.quad, n.eps);
    for (double L : Ls) {
        const RateBreakdown b = transition_rate(two_path(ScenarioKind::ThermalMinkowski, kPi, L), 0.0, n.quad, n.eps);
        crossing.push_back({{"L_kappa", L}, {"total_over_single", num(b.total / single_pi)}});
    }
    r.summary = {{"crossing_omega_over_kappa", kPi}, {"at_crossing", crossing}};
    r.diagnostics["normalization"] = {{"thermal_closed_form_constant", 1.0},
                                      {"single_to_closed_form_ratio", kSingleToClosedFormRatio}};
    return r;
}

std::vector<double> omega_tau_grid(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "default") throw ContractViolation("omega_tau must be \"default\" or an axis");
        return default_tau_grid(1.0);
    }
    return as_axis(j).values();
}

ResultRecord fig5(const json& p, const RunOptions& o) {
    const PresetNumerics n = preset_numerics(p);
    ResultRecord r;
    r.table.columns = rate_columns({"kappa_over_omega", "omega_tau", "tau_kappa"});
    const double L = p.at("L_kappa").get<double>();
    const std::vector<double> ratios = as_axis(p.at("kappa_over_omega")).values();
    const std::vector<double> wt = omega_tau_grid(p.at("omega_tau"));
    // κ = 1 throughout; Ω = 1/(κ/Ω).
    double min_over_single = std::numeric_limits<double>::infinity();
    json per_ratio = json::array();
    for (double q : ratios) {
        if (!(q > 0)) throw ContractViolation("fig5: kappa_over_omega must be > 0");
        const double om = 1.0 / q;
        std::vector<double> taus;
        for (double v : wt) taus.push_back(v / om);
        const auto cfg = two_path(ScenarioKind::DeSitterComoving, om, L);
        const RateSeries s = rate_series(cfg, taus, n.quad, n.eps, o.threads);
        const double single = single_rate(om, 1.0, 1.0, n.quad, n.eps);
        double mn = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < taus.size(); ++i) {
            append_rate_row(r, {q, wt[i], taus[i]}, s.rates[i], 1.0, single);
            if (std::isfinite(s.rates[i].total)) mn = std::min(mn, s.rates[i].total / single);
        }
        min_over_single = std::min(min_over_single, mn);
        per_ratio.push_back({{"kappa_over_omega", q}, {"min_total_over_single", mn}});
    }
    r.summary = {{"per_kappa_over_omega", per_ratio}, {"min_total_over_single", num(min_over_single)}};
    const json& c = p.at("critical");
    if (c.at("enabled").get<bool>()) {
        std::vector<double> cw = as_axis(c.at("omega_tau")).values();
        const CriticalExpansion ce = locate_critical_expansion(
            1.0, L, cw, c.at("lo").get<double>(), c.at("hi").get<double>(), n.quad, n.eps,
            c.at("iterations").get<int>(), o.threads);
        r.summary["critical_expansion"] = {{"kappa_over_omega", num(ce.kappa_over_omega)},
                                           {"bracket", {ce.lo, ce.hi}},
                                           {"bracketed", ce.bracketed},
                                           {"iterations", ce.iterations},
                                           {"L_kappa", L}};
    }
    return r;
}

ResultRecord fig6(const json& p, const RunOptions& o) {
    const PresetNumerics n = preset_numerics(p);
    ResultRecord r;
    r.table.columns = rate_columns({"omega_over_kappa", "paths", "tau_kappa"});
    const double L12 = p.at("L12_kappa").get<double>(), L13 = p.at("L13_kappa").get<double>(),
                 L23 = p.at("L23_kappa").get<double>();
    const std::vector<double> taus = as_axis(p.at("tau_kappa")).values();
    json terminal = json::array();
    for (double om : as_doubles(p.at("omega_over_kappa"))) {
        const double single = single_rate(om, 1.0, 1.0, n.quad, n.eps);
        SuperpositionConfig three;
        three.scenario.kind = ScenarioKind::DeSitterComoving;
        three.scenario.kappa = 1.0;
        three.scenario.separations = SeparationMatrix(3);
        three.scenario.separations.set_pair(0, 1, L12);
        three.scenario.separations.set_pair(0, 2, L13);
        three.scenario.separations.set_pair(1, 2, L23);
        three.detector = {om, 1.0};
        three.branches.assign(3, SwitchingProfile{});
        const std::vector<std::pair<std::string, SuperpositionConfig>> runs = {
            {"three_path", three},
            {"two_path_L12", two_path(ScenarioKind::DeSitterComoving, om, L12)},
            {"two_path_L13", two_path(ScenarioKind::DeSitterComoving, om, L13)}};
        for (const auto& [name, cfg] : runs) {
            const RateSeries s = rate_series(cfg, taus, n.quad, n.eps, o.threads);
            for (std::size_t i = 0; i < taus.size(); ++i) append_rate_row(r, {om, name, taus[i]}, s.rates[i], 1.0, single);
            terminal.push_back({{"omega_over_kappa", om}, {"paths", name},
                                {"terminal_total_over_single", num(s.rates.back().total / single)}});
        }
    }
    r.summary = {{"terminal", terminal}};
    r.diagnostics["preset_assumptions"] = {"L23_kappa defaults to L13_kappa"};
    return r;
}

bool contains_path(const json& doc, const std::string& key) {
    const json* cur = &doc;
    std::stringstream ks(key);
    std::string part;
    while (std::getline(ks, part, '.')) {
        if (cur->is_object() && cur->contains(part)) {
            cur = &(*cur)[part];
        } else if (cur->is_array()) {
            try {
                const std::size_t idx = std::stoul(part);
                if (idx >= cur->size()) return false;
                cur = &(*cur)[idx];
            } catch (const std::exception&) {
                return false;
            }
        } else {
            return false;
        }
    }
    return true;
}

}  // namespace

nlohmann::json ResultRecord::to_json() const {
    json rows = json::array();
    for (const auto& row : table.rows) rows.push_back(row);
    return {{"command", command},
            {"inputs", inputs},
            {"outputs", {{"summary", summary}, {"columns", table.columns}, {"rows", rows}}},
            {"diagnostics", diagnostics},
            {"provenance", {{"engine", "udw"}, {"engine_version", kEngineVersion}, {"timestamp", timestamp}}}};
}

std::string ResultRecord::payload() const {
    json j = to_json();
    j["provenance"].erase("timestamp");
    return j.dump();
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t k = 0; k < t.columns.size(); ++k) out += (k ? "," : "") + t.columns[k];
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            const json& c = row[k];
            if (c.is_null())
                out += "nan";
            else if (c.is_number_integer())
                out += std::to_string(c.get<long long>());
            else if (c.is_number())
                out += format_number(c.get<double>());
            else if (c.is_string())
                out += c.get<std::string>();
            else
                out += c.dump();
        }
        out += '\n';
    }
    return out;
}

ResultRecord run(const std::string& command, const ScenarioFile& file, const RunOptions& opts) {
    ResultRecord r;
    if (command == "prob")
        r = run_prob(file);
    else if (command == "rate")
        r = run_rate(file);
    else if (command == "ratio")
        r = run_ratio(file);
    else if (command == "series")
        r = run_series(file, opts);
    else if (command == "grid")
        r = run_grid(file, opts);
    else
        throw ContractViolation("unknown command \"" + command + "\"");
    r.command = command;
    r.inputs = file.resolved;
    finish(r);
    return r;
}

std::vector<std::string> figure_names() { return {"fig1", "fig3", "fig4", "fig5", "fig6"}; }

nlohmann::json figure_preset(const std::string& name) {
    if (name == "fig1")
        return {{"inv_sigma_kappa", {4.0, 40.0}},
                {"omega_over_kappa", {{"min", 0.05}, {"max", 5.0}, {"points", 100}}},
                {"L_kappa", {{"min", 0.05}, {"max", 5.0}, {"points", 100}}}};
    if (name == "fig3")
        return {{"kinds", {"thermal_minkowski", "desitter_comoving", "parallel_accelerated"}},
                {"L_kappa", {0.5, 1.5}},
                {"sigma_kappa", 0.1},
                {"omega_over_kappa", {{"min", -5.0}, {"max", 5.0}, {"points", 21}}},
                {"tau2_kappa", {{"min", -3.0}, {"max", 3.0}, {"points", 25}}},
                {"numerics", default_numerics(1e-12, 1e-9)}};
    if (name == "fig4")
        return {{"L_kappa", {1.0, 2.0, 3.0}},
                {"omega_over_kappa", {{"min", -4.0}, {"max", 4.0}, {"points", 81}}},
                {"numerics", default_numerics(1e-14, 1e-12)}};
    if (name == "fig5")
        return {{"L_kappa", 1.0},
                {"kappa_over_omega", {{"min", 0.5}, {"max", 10.0}, {"points", 20}}},
                {"omega_tau", "default"},
                {"critical",
                 {{"enabled", true},
                  {"lo", 2.0},
                  {"hi", 10.0},
                  {"iterations", 10},
                  {"omega_tau", {{"min", -10.0}, {"max", 10.0}, {"points", 81}}}}},
                {"numerics", default_numerics(1e-14, 1e-12)}};
    if (name == "fig6")
        return {{"omega_over_kappa", {-10.0, 0.5}},
                {"L12_kappa", 0.01},
                {"L13_kappa", 20.0},
                {"L23_kappa", 20.0},
                {"tau_kappa", {{"min", -12.0}, {"max", 16.0}, {"points", 141}}},
                {"numerics", default_numerics(1e-14, 1e-12)}};
    throw ContractViolation("unknown figure \"" + name + "\" (expected fig1, fig3, fig4, fig5 or fig6)");
}

ResultRecord run_figure(const std::string& name, const std::vector<std::string>& overrides, const RunOptions& opts) {
    json p = figure_preset(name);
    std::vector<std::string> errs;
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        const std::string key = o.substr(0, eq);
        if (eq == std::string::npos || !contains_path(p, key)) {
            errs.push_back("--set " + o + ": \"" + key + "\" is not a " + name + " preset key");
            continue;
        }
        apply_override(p, o);
    }
    if (!errs.empty()) throw ConfigError(errs);

    ResultRecord r;
    try {
        if (name == "fig1")
            r = fig1(p, opts);
        else if (name == "fig3")
            r = fig3(p, opts);
        else if (name == "fig4")
            r = fig4(p, opts);
        else if (name == "fig5")
            r = fig5(p, opts);
        else
            r = fig6(p, opts);
    } catch (const json::exception& e) {
        throw ConfigError({name + " preset: " + e.what()});
    }
    r.command = "figure " + name;
    r.inputs = {{"figure", name}, {"preset", p}, {"kappa", 1.0}};
    finish(r);
    return r;
}

ResultRecord run_oracle(const ScenarioFile& f, const RunOptions& opts) {
    const double k = f.config.scenario.kappa;
    const OracleReport rep = oracle_check(f.config, opts.oracle_resolution, f.quad, opts.oracle_eps_floor_kappa / k);
    ResultRecord r;
    r.command = "oracle";
    r.inputs = f.resolved;
    r.table.columns = {"i", "j", "oracle_re", "oracle_im", "engine_re", "engine_im", "oracle_error", "engine_error",
                       "deviation"};
    for (const auto& t : rep.terms)
        r.table.rows.push_back({t.i + 1, t.j + 1, num(t.oracle.real()), num(t.oracle.imag()), num(t.engine.real()),
                                num(t.engine.imag()), num(t.oracle_error), num(t.engine_error), num(t.deviation)});
    r.summary = {{"status", to_string(rep.status)},
                 {"resolution", rep.resolution},
                 {"eps_kappa", rep.epsilon * k},
                 {"oracle_total", num(rep.oracle_total)},
                 {"engine_total", num(rep.engine_total)},
                 {"deviation", num(rep.deviation)},
                 {"relative_deviation", num(rep.relative_deviation)},
                 {"combined_bound", num(rep.combined_bound)}};
    if (!rep.note.empty()) r.summary["note"] = rep.note;
    r.timestamp = utc_now();
    r.diagnostics["flagged_cells"] = 0;
    r.status = rep.status == OracleStatus::Disagree ? kExitOracleDisagree : kExitOk;
    return r;
}

}  // namespace udw
