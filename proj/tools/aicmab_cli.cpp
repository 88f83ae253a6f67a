// Command-line front end: run, sweep, oracle-check, plot-data.
//
// Exit status: 0 success, 1 runtime failure, 2 invalid invocation.

#include "aicmab/oracle_check.hpp"
#include "aicmab/sweep.hpp"
#include "aicmab/trace_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace aicmab;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
        out.push_back(item);
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

double to_number(const std::string& s) {
    try {
        return parse_double(s);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
}

PriorPreference parse_pref(const std::string& text) {
    const auto parts = split_list(text);
    if (parts.size() != 2) throw UsageError("--pref expects two comma-separated probabilities");
    try {
        return PriorPreference(to_number(parts[0]), to_number(parts[1]));
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--pref: ") + e.what());
    }
}

AgentConfig parse_agent(const std::string& text) {
    // "oracle" or "<policy>-<fusion>", e.g. "eps-greedy-laplace", "ai-vbis".
    if (text == "oracle") return {PolicyKind::Oracle, FusionMethod::Laplace};
    const auto dash = text.rfind('-');
    if (dash == std::string::npos) throw UsageError("agent must be 'oracle' or '<policy>-<fusion>': " + text);
    try {
        return {parse_policy_kind(text.substr(0, dash)), parse_fusion_method(text.substr(dash + 1))};
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

struct CommonFlags {
    std::size_t t = 100;
    std::size_t runs = 100;
    std::string pref = "0.001,0.999";
    double epsilon = kDefaultEpsilon;
    std::size_t n_samples = kDefaultSamples;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    bool csv_timing = false;

    void attach(CLI::App& app) {
        app.add_option("--t", t, "Iterations per run")->check(CLI::PositiveNumber);
        app.add_option("--runs", runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
        app.add_option("--epsilon", epsilon, "Exploration rate for eps-greedy")->check(CLI::Range(0.0, 1.0));
        app.add_option("--n-samples", n_samples, "Importance samples per VBIS fusion")->check(CLI::Range(2, 100000000));
        app.add_option("--seed", seed, "Master seed");
        app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
        app.add_flag("--csv-timing", csv_timing, "Write measured selection times into CSV and JSON output (not reproducible)");
    }

    ExperimentConfig base() const {
        ExperimentConfig cfg;
        cfg.iterations = t;
        cfg.mc_runs = runs;
        cfg.epsilon = epsilon;
        cfg.n_samples = n_samples;
        cfg.master_seed = seed;
        cfg.pref = parse_pref(pref);
        return cfg;
    }
};

int cmd_run(const CommonFlags& common, const std::string& policy, const std::string& fusion, std::size_t k,
            std::size_t c, const std::string& out) {
    ExperimentConfig cfg = common.base();
    try {
        cfg.agent = {parse_policy_kind(policy), parse_fusion_method(fusion)};
        cfg.num_arms = k;
        cfg.context_dim = static_cast<Eigen::Index>(c);
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const RegretTrace trace = run_monte_carlo(cfg, common.workers);
    std::ostringstream body;
    write_trace_csv(body, trace, common.csv_timing);
    write_file_atomic(out, body.str());
    std::cout << "final_regret=" << format_double(trace.mean_final_regret())
              << " sel_time_ns=" << std::llround(trace.mean_selection_time_s * 1e9) << '\n';
    return 0;
}

int cmd_sweep(const CommonFlags& common, const std::string& grid_name, const std::string& k_list,
              const std::string& c_list, const std::string& pref_list, const std::string& agents,
              const std::string& out_dir) {
    SweepGrid grid;
    if (grid_name == "paper") {
        grid = full_grid();
    } else if (!grid_name.empty()) {
        throw UsageError("unknown grid '" + grid_name + "'");
    } else {
        if (k_list.empty() || c_list.empty() || pref_list.empty()) {
            throw UsageError("sweep needs --grid paper or all of --k-list, --c-list, --pref-list");
        }
        for (const auto& s : split_list(k_list)) {
            const double v = to_number(s);
            if (v < 1 || v != std::floor(v)) throw UsageError("bad K: " + s);
            grid.ks.push_back(static_cast<std::size_t>(v));
        }
        for (const auto& s : split_list(c_list)) {
            const double v = to_number(s);
            if (v < 1 || v != std::floor(v)) throw UsageError("bad C: " + s);
            grid.cs.push_back(static_cast<Eigen::Index>(v));
        }
        for (const auto& s : split_list(pref_list)) {
            const double p1 = to_number(s);
            if (!(p1 > 0.0 && p1 < 1.0)) throw UsageError("preference must lie in (0,1): " + s);
            grid.pref1s.push_back(p1);
        }
    }
    if (!agents.empty()) {
        grid.agents.clear();
        for (const auto& a : split_list(agents)) grid.agents.push_back(parse_agent(a));
    }

    SweepOptions opts;
    opts.base = common.base();
    opts.out_dir = out_dir;
    opts.workers = common.workers;
    opts.csv_timing = common.csv_timing;
    opts.on_cell = [](const ExperimentConfig& cfg, bool skipped) {
        std::cerr << (skipped ? "skip " : "done ") << cell_stem(cfg) << '\n';
    };
    const SweepReport report = run_sweep(grid, opts);
    std::cout << "cells=" << report.cells_total << " run=" << report.cells_run << " skipped=" << report.cells_skipped
              << '\n';
    return 0;
}

int cmd_oracle_check(std::size_t cases, std::uint64_t seed, std::size_t samples) {
    const OracleCheckReport report = run_oracle_check(cases, seed, samples);
    print_report(std::cout, report);
    if (report.all_passed()) return 0;
    std::cout << "failed:";
    for (const auto& r : report.results)
        if (!r.passed) std::cout << ' ' << r.name;
    std::cout << '\n';
    return 1;
}

int cmd_plot_data(const std::string& in_dir, const std::string& out) {
    std::vector<fs::path> files;
    if (!fs::is_directory(in_dir)) throw std::runtime_error("not a directory: " + in_dir);
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no trace files in " + in_dir);

    std::vector<TraceRow> rows;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw std::runtime_error("cannot read " + f.string());
        auto part = read_trace_csv(in, f.string());
        rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    std::ostringstream body;
    write_plot_csv(body, aggregate_plot_rows(rows));
    write_file_atomic(out, body.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active-inference contextual bandit experiments"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    std::string policy, fusion = "laplace", out = "trace.csv";
    std::size_t k = 0, c = 0;
    auto* run = app.add_subcommand("run", "Monte Carlo runs of one agent configuration");
    run_flags.attach(*run);
    run->add_option("--policy", policy, "oracle | eps-greedy | lts | ai")
        ->required()
        ->check(CLI::IsMember({"oracle", "eps-greedy", "lts", "ai"}));
    run->add_option("--fusion", fusion, "vbis | laplace")->check(CLI::IsMember({"vbis", "laplace"}));
    run->add_option("--k", k, "Number of arms")->required()->check(CLI::PositiveNumber);
    run->add_option("--c", c, "Context dimension")->required()->check(CLI::PositiveNumber);
    run->add_option("--pref", run_flags.pref, "p_ev(o=0),p_ev(o=1)");
    run->add_option("--out", out, "Trace CSV path");

    CommonFlags sweep_flags;
    std::string grid, k_list, c_list, pref_list, agents, out_dir;
    auto* sweep = app.add_subcommand("sweep", "Grid of configurations, resumable");
    sweep_flags.attach(*sweep);
    sweep->add_option("--grid", grid, "'paper' for the full comparison grid")->check(CLI::IsMember({"paper"}));
    sweep->add_option("--k-list", k_list, "Comma-separated arm counts");
    sweep->add_option("--c-list", c_list, "Comma-separated context dimensions");
    sweep->add_option("--pref-list", pref_list, "Comma-separated p_ev(o=1) values");
    sweep->add_option("--agents", agents, "Comma-separated agents, e.g. oracle,ai-laplace (default: all seven)");
    sweep->add_option("--out-dir", out_dir, "Output directory")->required();

    std::size_t cases = 200, samples = 100000;
    std::uint64_t check_seed = 0;
    auto* check = app.add_subcommand("oracle-check", "Fusion/EFE invariants against quadrature");
    check->add_option("--cases", cases, "Random cases")->check(CLI::PositiveNumber);
    check->add_option("--seed", check_seed, "Seed");
    check->add_option("--vbis-samples", samples, "Importance samples for the VBIS comparison")
        ->check(CLI::Range(2, 100000000));

    std::string in_dir, plot_out;
    auto* plot = app.add_subcommand("plot-data", "Mean cumulative regret per cell and iteration");
    plot->add_option("--in-dir", in_dir, "Directory of trace CSVs")->required();
    plot->add_option("--out", plot_out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) return cmd_run(run_flags, policy, fusion, k, c, out);
        if (*sweep) return cmd_sweep(sweep_flags, grid, k_list, c_list, pref_list, agents, out_dir);
        if (*check) return cmd_oracle_check(cases, check_seed, samples);
        if (*plot) return cmd_plot_data(in_dir, plot_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
