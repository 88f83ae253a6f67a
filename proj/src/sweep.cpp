#include "aicmab/sweep.hpp"

#include "aicmab/trace_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aicmab {

SweepGrid full_grid() {
    SweepGrid g;
    g.ks = {5, 10, 20, 40};
    g.cs = {5, 10, 20};
    g.pref1s = {0.999, 0.6};
    return g;
}

std::string cell_stem(const ExperimentConfig& cfg) {
    return std::string(to_string(cfg.agent.policy)) + '_' + cfg.agent.fusion_label() + "_K" +
           std::to_string(cfg.num_arms) + "_C" + std::to_string(cfg.context_dim) + "_p" + format_double(cfg.pref.p1());
}

namespace {

std::vector<ExperimentConfig> expand(const SweepGrid& grid, const ExperimentConfig& base) {
    std::vector<ExperimentConfig> cells;
    for (const auto k : grid.ks)
        for (const auto c : grid.cs)
            for (const double p1 : grid.pref1s)
                for (const auto& agent : grid.agents) {
                    ExperimentConfig cfg = base;
                    cfg.num_arms = k;
                    cfg.context_dim = c;
                    cfg.pref = PriorPreference::from_p1(p1);
                    cfg.agent = agent;
                    cfg.validate();
                    cells.push_back(cfg);
                }
    return cells;
}

}  // namespace

SweepReport run_sweep(const SweepGrid& grid, const SweepOptions& options) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + options.out_dir.string() + ": " + ec.message());

    const auto cells = expand(grid, options.base);
    SweepReport report;
    report.cells_total = cells.size();
    for (const auto& cfg : cells) {
        const std::string stem = cell_stem(cfg);
        const fs::path csv = options.out_dir / (stem + ".csv");
        if (fs::exists(csv)) {
            ++report.cells_skipped;
            if (options.on_cell) options.on_cell(cfg, true);
            continue;
        }
        try {
            const RegretTrace trace = run_monte_carlo(cfg, options.workers);
            std::ostringstream body;
            write_trace_csv(body, trace, options.csv_timing);
            write_file_atomic(options.out_dir / (stem + ".json"), summary_json(trace, options.csv_timing) + '\n');
            write_file_atomic(csv, body.str());
        } catch (const std::exception& e) {
            throw std::runtime_error("cell " + stem + ": " + e.what());
        }
        ++report.cells_run;
        if (options.on_cell) options.on_cell(cfg, false);
    }

    std::ostringstream all;
    for (const auto& cfg : cells) {
        std::ifstream in(options.out_dir / (cell_stem(cfg) + ".json"));
        std::string line;
        if (in && std::getline(in, line)) all << line << '\n';
    }
    write_file_atomic(options.out_dir / "summary.jsonl", all.str());
    return report;
}

}  // namespace aicmab
