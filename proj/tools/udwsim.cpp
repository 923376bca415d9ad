// udwsim: command-line front end for the udw engine.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "udw/config.hpp"
#include "udw/errors.hpp"
#include "udw/parallel.hpp"
#include "udw/runner.hpp"

namespace {

bool use_color() { return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stderr)); }

void diag(const char* level, const char* color, const std::string& msg) {
    if (use_color())
        std::cerr << "\033[" << color << "m" << level << ":\033[0m " << msg << '\n';
    else
        std::cerr << level << ": " << msg << '\n';
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

struct Cli {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    std::string format;
    double eps0 = 0.0;
    int eps_steps = 0;
    double tol = 0.0;
    std::string threads = "1";
    int oracle_resolution = 400;
};

int parse_threads(const std::string& s) {
    if (s == "auto") return 0;
    std::size_t used = 0;
    int n = 0;
    try {
        n = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || n < 1) throw udw::ConfigError({"--threads: expected a positive integer or auto"});
    return n;
}

// Flags that map onto config or preset keys.
std::vector<std::string> numeric_overrides(const Cli& c) {
    std::vector<std::string> o;
    auto f = [](double v) { return udw::format_number(v); };
    if (c.eps0 > 0) o.push_back("numerics.eps0_kappa=" + f(c.eps0));
    if (c.eps_steps > 0) o.push_back("numerics.eps_steps=" + std::to_string(c.eps_steps));
    if (c.tol > 0) o.push_back("numerics.rel_tol=" + f(c.tol));
    return o;
}

int emit(const udw::ResultRecord& r, const std::string& format, const std::string& out) {
    const std::string fmt = format.empty() ? "csv" : format;
    if (fmt == "json") {
        write_text(out, r.to_json().dump(2) + "\n");
    } else {
        write_text(out, udw::to_csv(r.table));
        if (!out.empty() && out != "-") write_text(out + ".json", r.to_json().dump(2) + "\n");
    }
    if (r.flagged > 0) diag("warning", "33", std::to_string(r.flagged) + " flagged (not converged) cells");
    if (r.summary.contains("status") && r.summary["status"] != "agree")
        diag("warning", "33", "oracle status " + r.summary["status"].get<std::string>() +
                                  (r.summary.contains("note") ? ": " + r.summary["note"].get<std::string>() : ""));
    return r.status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unruh-DeWitt detector on a superposition of trajectories"};
    app.require_subcommand(1);
    app.fallthrough();
    Cli c;
    app.add_option("--set", c.sets, "Override a config key, key=value (repeatable)");
    app.add_option("--out", c.out, "Output path (stdout if omitted); csv output also writes <out>.json");
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--eps0", c.eps0, "Largest regulator on the ladder, kappa*eps")->check(CLI::PositiveNumber);
    app.add_option("--eps-steps", c.eps_steps, "Number of regulator values")->check(CLI::PositiveNumber);
    app.add_option("--tol", c.tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--threads", c.threads, "Worker threads, n or auto");
    app.add_option("--oracle-resolution", c.oracle_resolution, "Fixed-grid intervals per axis for oracle")
        ->check(CLI::PositiveNumber);

    std::vector<std::pair<std::string, CLI::App*>> config_cmds;
    const std::vector<std::pair<std::string, std::string>> cmds = {
        {"prob", "Transition probability breakdown"},
        {"rate", "Transition rate at output.tau_kappa"},
        {"ratio", "Detailed-balance ratio rate(omega)/rate(-omega)"},
        {"series", "Transition rate over a proper-time grid"},
        {"grid", "Probability grid (output.grid)"},
        {"oracle", "Compare the engine against a fixed-grid Riemann sum"},
        {"validate", "Print the resolved configuration"}};
    for (const auto& [name, help] : cmds) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", c.config, "Scenario file (JSON)")->required();
        config_cmds.emplace_back(name, sub);
    }
    std::string figure;
    CLI::App* fig = app.add_subcommand("figure", "Data behind a figure preset");
    fig->add_option("name", figure, "Preset name")->required()->check(CLI::IsMember(udw::figure_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? udw::kExitOk : udw::kExitConfig;
    }

    try {
        udw::RunOptions opts;
        opts.threads = parse_threads(c.threads);
        opts.oracle_resolution = c.oracle_resolution;
        std::vector<std::string> overrides = numeric_overrides(c);

        if (fig->parsed()) {
            overrides.insert(overrides.end(), c.sets.begin(), c.sets.end());
            // Numerics flags only apply to presets that integrate.
            const nlohmann::json preset = udw::figure_preset(figure);
            if (!preset.contains("numerics"))
                overrides.erase(std::remove_if(overrides.begin(), overrides.end(),
                                               [](const std::string& s) { return s.rfind("numerics.", 0) == 0; }),
                                overrides.end());
            return emit(udw::run_figure(figure, overrides, opts), c.format, c.out);
        }

        std::string cmd;
        for (const auto& [name, sub] : config_cmds)
            if (sub->parsed()) cmd = name;
        overrides.insert(overrides.end(), c.sets.begin(), c.sets.end());
        if (!c.format.empty()) overrides.push_back("output.format=\"" + c.format + "\"");
        if (!c.out.empty()) overrides.push_back("output.path=\"" + c.out + "\"");
        const udw::ScenarioFile file = udw::validate_config(c.config, overrides);

        if (cmd == "validate") {
            std::cout << file.resolved.dump(2) << '\n';
            return udw::kExitOk;
        }
        const udw::ResultRecord r = cmd == "oracle" ? udw::run_oracle(file, opts) : udw::run(cmd, file, opts);
        return emit(r, file.format, file.path);
    } catch (const udw::ConfigError& e) {
        diag("error", "31", e.what());
        return udw::kExitConfig;
    } catch (const std::exception& e) {
        diag("error", "31", e.what());
        return udw::kExitRuntime;
    }
}
