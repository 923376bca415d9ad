#include "udw/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "udw/errors.hpp"

namespace udw {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Reads keys of one JSON object, recording every problem instead of
// throwing, and rejects keys that were never asked for.
class Block {
public:
    Block(const json* j, std::string path, std::vector<std::string>& errs) : j_(j), path_(std::move(path)), errs_(errs) {
        if (j_ && !j_->is_object()) {
            errs_.push_back(path_ + ": expected an object");
            j_ = nullptr;
        }
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_ && j_->contains(key);
    }

    const json* raw(const std::string& key) {
        if (!has(key)) return nullptr;
        return &(*j_)[key];
    }

    double number(const std::string& key, double def, bool required = false) {
        const json* v = raw(key);
        if (!v) {
            if (required) errs_.push_back(where(key) + ": missing required key");
            return def;
        }
        if (!v->is_number()) {
            errs_.push_back(where(key) + ": expected a number");
            return def;
        }
        return v->get<double>();
    }

    int integer(const std::string& key, int def) {
        const json* v = raw(key);
        if (!v) return def;
        if (!v->is_number_integer()) {
            errs_.push_back(where(key) + ": expected an integer");
            return def;
        }
        return v->get<int>();
    }

    std::string text(const std::string& key, const std::string& def, bool required = false) {
        const json* v = raw(key);
        if (!v) {
            if (required) errs_.push_back(where(key) + ": missing required key");
            return def;
        }
        if (!v->is_string()) {
            errs_.push_back(where(key) + ": expected a string");
            return def;
        }
        return v->get<std::string>();
    }

    Block child(const std::string& key) { return Block(raw(key), where(key), errs_); }

    AxisRange axis(const std::string& key, AxisRange def) {
        Block b = child(key);
        AxisRange a;
        a.min = b.number("min", def.min);
        a.max = b.number("max", def.max);
        a.points = b.integer("points", def.points);
        b.finish();
        if (!std::isfinite(a.min) || !std::isfinite(a.max) || a.max < a.min)
            errs_.push_back(where(key) + ": need finite min <= max");
        if (a.points < 1 || (a.points > 1 && a.max == a.min))
            errs_.push_back(where(key) + ": need points >= 1 and a positive range when points > 1");
        return a;
    }

    void finish() {
        if (!j_) return;
        for (const auto& [k, v] : j_->items())
            if (!seen_.count(k)) errs_.push_back(where(k) + ": unknown key");
    }

    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool present() const { return j_ != nullptr; }

private:
    const json* j_;
    std::string path_;
    std::vector<std::string>& errs_;
    std::set<std::string> seen_;
};

json axis_json(const AxisRange& a) { return {{"min", a.min}, {"max", a.max}, {"points", a.points}}; }

void collect(std::vector<std::string>& errs, const std::function<void()>& check) {
    try {
        check();
    } catch (const ConfigError& e) {
        for (const auto& v : e.violations()) errs.push_back(v);
    }
}

}  // namespace

ScenarioFile parse_config(const json& doc) {
    std::vector<std::string> errs;
    ScenarioFile out;
    Block root(&doc, "", errs);

    out.schema_version = root.text("schema_version", "", true);
    if (root.has("schema_version") && out.schema_version != kSchemaVersion && doc["schema_version"].is_string())
        errs.push_back("schema_version: unsupported version \"" + out.schema_version + "\" (expected \"" +
                       kSchemaVersion + "\")");

    // Scenario.
    Block sc = root.child("scenario");
    if (!root.has("scenario")) errs.push_back("scenario: missing required block");
    const std::string kind_name = sc.text("kind", "", root.has("scenario"));
    ScenarioKind kind = ScenarioKind::ThermalMinkowski;
    if (!kind_name.empty()) {
        try {
            kind = scenario_kind_from_string(kind_name);
        } catch (const ContractViolation& e) {
            errs.push_back("scenario.kind: " + std::string(e.what()));
        }
    }
    const double kappa = sc.number("kappa", 1.0);
    const double kk = (kappa > 0 && std::isfinite(kappa)) ? kappa : 1.0;

    // Branches first, since they fix N.
    std::vector<SwitchingProfile> branches;
    json branches_echo = json::array();
    const json* jb = root.raw("branches");
    if (!jb) {
        errs.push_back("branches: missing required list");
    } else if (!jb->is_array() || jb->empty()) {
        errs.push_back("branches: expected a non-empty list");
    } else {
        for (std::size_t i = 0; i < jb->size(); ++i) {
            Block b(&(*jb)[i], "branches." + std::to_string(i), errs);
            if (!b.present()) continue;
            SwitchingProfile p;
            const std::string prof = b.text("profile", "gaussian");
            if (prof == "gaussian")
                p.kind = ProfileKind::Gaussian;
            else if (prof == "cosine_squared")
                p.kind = ProfileKind::CosineSquared;
            else
                errs.push_back(b.where("profile") + ": unknown profile \"" + prof +
                               "\" (expected gaussian or cosine_squared)");
            const double sk = b.number("sigma_kappa", 1.0);
            const double ck = b.number("center_kappa", 0.0);
            b.finish();
            p.sigma = sk / kk;
            p.center = ck / kk;
            branches.push_back(p);
            branches_echo.push_back({{"profile", to_string(p.kind)}, {"sigma_kappa", sk}, {"center_kappa", ck}});
        }
    }
    const std::size_t n = branches.size();

    // Separations: every unordered pair exactly once (or twice with equal
    // values).
    SeparationMatrix sep(n == 0 ? 1 : n);
    std::map<std::pair<std::size_t, std::size_t>, double> given;
    const json* js = sc.raw("separations");
    if (js && !js->is_array()) {
        errs.push_back("scenario.separations: expected a list");
        js = nullptr;
    }
    if (js) {
        for (std::size_t k = 0; k < js->size(); ++k) {
            Block e(&(*js)[k], "scenario.separations." + std::to_string(k), errs);
            if (!e.present()) continue;
            const json* pr = e.raw("pair");
            const double L = e.number("L_kappa", 0.0, true);
            e.finish();
            if (!pr || !pr->is_array() || pr->size() != 2 || !(*pr)[0].is_number_integer() ||
                !(*pr)[1].is_number_integer()) {
                errs.push_back(e.where("pair") + ": expected two 1-based branch indices");
                continue;
            }
            const long a = (*pr)[0].get<long>(), b = (*pr)[1].get<long>();
            if (a < 1 || b < 1 || static_cast<std::size_t>(a) > n || static_cast<std::size_t>(b) > n) {
                errs.push_back(e.where("pair") + ": branch index outside 1.." + std::to_string(n));
                continue;
            }
            const std::string name = "L_" + std::to_string(a) + "," + std::to_string(b);
            if (!std::isfinite(L) || L < 0) {
                errs.push_back(e.where("L_kappa") + ": " + name + " must be finite and >= 0");
                continue;
            }
            if (a == b) {
                if (L != 0) errs.push_back(e.where("L_kappa") + ": diagonal entry " + name + " must be 0");
                continue;
            }
            const auto ij = std::make_pair(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            const auto ji = std::make_pair(ij.second, ij.first);
            if (given.count(ij)) {
                errs.push_back(e.where("pair") + ": " + name + " given more than once");
                continue;
            }
            if (given.count(ji) && given[ji] != L) {
                errs.push_back("separation matrix is not symmetric: L_" + std::to_string(b) + "," +
                               std::to_string(a) + " = " + fmt(given[ji]) + " but " + name + " = " + fmt(L));
            }
            given[ij] = L;
        }
    }
    json sep_echo = json::array();
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) {
            auto it = given.find({i, j});
            if (it == given.end()) it = given.find({j, i});
            if (it == given.end()) {
                errs.push_back("scenario.separations: L_" + std::to_string(i) + "," + std::to_string(j) +
                               " missing (every pair of the " + std::to_string(n) + " branches needs a separation)");
                continue;
            }
            sep.set_pair(i - 1, j - 1, it->second / kk);
            sep_echo.push_back({{"pair", {i, j}}, {"L_kappa", it->second}});
        }
    sc.finish();

    // Detector.
    Block det = root.child("detector");
    if (!root.has("detector")) errs.push_back("detector: missing required block");
    const double omk = det.number("omega_over_kappa", 1.0, root.has("detector"));
    const double lam = det.number("lambda", 1.0);
    det.finish();

    out.config.scenario.kind = kind;
    out.config.scenario.kappa = kappa;
    out.config.scenario.separations = sep;
    out.config.detector = {omk * kk, lam};
    out.config.branches = branches;
    if (n > 0) collect(errs, [&] { out.config.validate(); });

    // Numerics.
    Block num = root.child("numerics");
    out.quad.abs_tol = num.number("abs_tol", out.quad.abs_tol);
    out.quad.rel_tol = num.number("rel_tol", out.quad.rel_tol);
    out.quad.max_refinements = num.integer("max_refinements", out.quad.max_refinements);
    out.quad.truncation_radius = num.number("truncation_radius_kappa", out.quad.truncation_radius);
    const double eps0k = num.number("eps0_kappa", out.eps.eps0);
    out.eps.ratio = num.number("eps_ratio", out.eps.ratio);
    out.eps.steps = num.integer("eps_steps", out.eps.steps);
    out.eps.extrapolation_order = num.integer("extrapolation_order", out.eps.extrapolation_order);
    num.finish();
    out.eps.eps0 = eps0k;
    collect(errs, [&] { out.quad.validate(); });
    collect(errs, [&] { out.eps.validate(); });
    out.eps.eps0 = eps0k / kk;

    // Output.
    Block o = root.child("output");
    out.format = o.text("format", "csv");
    if (out.format != "csv" && out.format != "json")
        errs.push_back("output.format: expected csv or json, got \"" + out.format + "\"");
    out.path = o.text("path", "");
    out.tau_kappa = o.number("tau_kappa", 0.0);
    json series_echo = "default";
    {
        Block s = o.child("series");
        if (s.has("tau_kappa")) {
            const json* t = s.raw("tau_kappa");
            if (t->is_string()) {
                if (t->get<std::string>() != "default")
                    errs.push_back("output.series.tau_kappa: expected \"default\" or an axis");
            } else {
                out.series_tau_kappa = s.axis("tau_kappa", {-10.0, 10.0, 101});
                series_echo = axis_json(*out.series_tau_kappa);
            }
        }
        s.finish();
    }
    {
        Block g = o.child("grid");
        out.grid.kind = g.text("kind", out.grid.kind);
        if (out.grid.kind != "interference" && out.grid.kind != "difference")
            errs.push_back("output.grid.kind: expected interference or difference, got \"" + out.grid.kind + "\"");
        out.grid.omega_over_kappa = g.axis("omega_over_kappa", out.grid.omega_over_kappa);
        out.grid.tau2_kappa = g.axis("tau2_kappa", out.grid.tau2_kappa);
        out.grid.L_kappa_axis = g.axis("L_kappa_axis", out.grid.L_kappa_axis);
        out.grid.sigma_kappa = g.number("sigma_kappa", out.grid.sigma_kappa);
        out.grid.L_kappa = g.number("L_kappa", out.grid.L_kappa);
        g.finish();
        if (!(out.grid.sigma_kappa > 0)) errs.push_back("output.grid.sigma_kappa: must be > 0");
        if (!(out.grid.L_kappa >= 0)) errs.push_back("output.grid.L_kappa: must be >= 0");
        if (out.grid.kind == "difference" && !(out.grid.L_kappa_axis.min > 0))
            errs.push_back("output.grid.L_kappa_axis: difference grids need L_kappa > 0");
    }
    o.finish();
    root.finish();

    if (!errs.empty()) throw ConfigError(errs);

    out.resolved = {
        {"schema_version", out.schema_version},
        {"scenario", {{"kind", to_string(kind)}, {"kappa", kappa}, {"separations", sep_echo}}},
        {"detector", {{"omega_over_kappa", omk}, {"lambda", lam}}},
        {"branches", branches_echo},
        {"numerics",
         {{"abs_tol", out.quad.abs_tol},
          {"rel_tol", out.quad.rel_tol},
          {"max_refinements", out.quad.max_refinements},
          {"truncation_radius_kappa", out.quad.truncation_radius},
          {"eps0_kappa", eps0k},
          {"eps_ratio", out.eps.ratio},
          {"eps_steps", out.eps.steps},
          {"extrapolation_order", out.eps.extrapolation_order}}},
        {"output",
         {{"format", out.format},
          {"path", out.path},
          {"tau_kappa", out.tau_kappa},
          {"series", {{"tau_kappa", series_echo}}},
          {"grid",
           {{"kind", out.grid.kind},
            {"omega_over_kappa", axis_json(out.grid.omega_over_kappa)},
            {"tau2_kappa", axis_json(out.grid.tau2_kappa)},
            {"L_kappa_axis", axis_json(out.grid.L_kappa_axis)},
            {"sigma_kappa", out.grid.sigma_kappa},
            {"L_kappa", out.grid.L_kappa}}}}}};
    return out;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError({"--set " + assignment + ": expected key=value"});
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* cur = &doc;
    std::stringstream ks(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ks, part, '.')) parts.push_back(part);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const std::string& p = parts[k];
        if (p.empty()) throw ConfigError({"--set " + key + ": empty path component"});
        json* next = nullptr;
        if (cur->is_array()) {
            std::size_t idx = 0;
            try {
                std::size_t used = 0;
                idx = std::stoul(p, &used);
                if (used != p.size()) throw std::invalid_argument(p);
            } catch (const std::exception&) {
                throw ConfigError({"--set " + key + ": \"" + p + "\" is not a list index"});
            }
            if (idx >= cur->size()) throw ConfigError({"--set " + key + ": index " + p + " out of range"});
            next = &(*cur)[idx];
        } else {
            if (cur->is_null()) *cur = json::object();
            if (!cur->is_object()) throw ConfigError({"--set " + key + ": \"" + p + "\" is below a scalar"});
            next = &(*cur)[p];
        }
        cur = next;
    }
    *cur = value;
}

ScenarioFile validate_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path + ": cannot open file"});
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({path + ": parse failure: " + e.what()});
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return parse_config(doc);
}

}  // namespace udw
