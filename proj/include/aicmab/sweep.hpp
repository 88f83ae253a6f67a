#pragma once

#include "aicmab/experiment.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace aicmab {

struct SweepGrid {
    std::vector<std::size_t> ks;
    std::vector<Eigen::Index> cs;
    std::vector<double> pref1s;  // p_ev(o = 1); p_ev(o = 0) is the complement
    std::vector<AgentConfig> agents = all_agent_configs();

    [[nodiscard]] std::size_t cell_count() const { return ks.size() * cs.size() * pref1s.size() * agents.size(); }
};

/// K ∈ {5,10,20,40}, C ∈ {5,10,20}, p_ev(1) ∈ {0.999, 0.6} and all seven agents.
SweepGrid full_grid();

struct SweepOptions {
    ExperimentConfig base;  // T, runs, ε, samples and seed; grid fields are overwritten
    std::filesystem::path out_dir;
    std::size_t workers = 1;
    bool csv_timing = false;
    std::function<void(const ExperimentConfig&, bool skipped)> on_cell;
};

struct SweepReport {
    std::size_t cells_total = 0;
    std::size_t cells_run = 0;
    std::size_t cells_skipped = 0;
};

/// File stem of one cell, e.g. "ai_laplace_K40_C20_p0.999".
std::string cell_stem(const ExperimentConfig& cfg);

/// Runs every cell whose trace is not already present. Each finished cell
/// writes `<stem>.csv` and `<stem>.json` atomically; afterwards
/// `summary.jsonl` is rebuilt from all cell summaries in grid order.
SweepReport run_sweep(const SweepGrid& grid, const SweepOptions& options);

}  // namespace aicmab
