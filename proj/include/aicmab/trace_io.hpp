#pragma once

#include "aicmab/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace aicmab {

inline constexpr const char* kTraceHeader = "method,fusion,K,C,pref1,run,iteration,cum_regret,selection_time_ns";
inline constexpr const char* kPlotHeader = "method,fusion,K,C,pref1,iteration,mean_cum_regret,stderr";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

/// One row per (run, iteration), iterations numbered from 1. With
/// `include_timing == false` the timing column is written as 0 so the file is
/// a pure function of the configuration.
void write_trace_csv(std::ostream& os, const RegretTrace& trace, bool include_timing);

struct TraceRow {
    std::string method;
    std::string fusion;
    std::size_t k;
    std::size_t c;
    std::string pref1;
    std::size_t run;
    std::size_t iteration;
    double cum_regret;
    std::int64_t selection_time_ns;
};

/// Throws std::runtime_error naming `source` and the line on malformed input.
std::vector<TraceRow> read_trace_csv(std::istream& is, const std::string& source);

struct PlotRow {
    std::string method;
    std::string fusion;
    std::size_t k;
    std::size_t c;
    std::string pref1;
    std::size_t iteration;
    double mean_cum_regret;
    double stderr_cum_regret;
};

/// Mean and standard error over runs per (cell, iteration), cells in input order.
std::vector<PlotRow> aggregate_plot_rows(const std::vector<TraceRow>& rows);
void write_plot_csv(std::ostream& os, const std::vector<PlotRow>& rows);

/// Single-line JSON record with the cell's config echo and headline numbers.
/// The measured selection time is only included on request.
std::string summary_json(const RegretTrace& trace, bool include_timing);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace aicmab
