#include "aicmab/trace_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace aicmab {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return v;
}

namespace {

template <typename Int>
Int parse_int(std::string_view text) {
    Int v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

void write_trace_csv(std::ostream& os, const RegretTrace& trace, bool include_timing) {
    const auto& cfg = trace.config;
    const std::string prefix = std::string(to_string(cfg.agent.policy)) + ',' + cfg.agent.fusion_label() + ',' +
                               std::to_string(cfg.num_arms) + ',' + std::to_string(cfg.context_dim) + ',' +
                               format_double(cfg.pref.p1()) + ',';
    os << kTraceHeader << '\n';
    for (std::size_t r = 0; r < trace.cum_regret.size(); ++r) {
        for (std::size_t t = 0; t < trace.cum_regret[r].size(); ++t) {
            os << prefix << r << ',' << (t + 1) << ',' << format_double(trace.cum_regret[r][t]) << ','
               << (include_timing ? trace.selection_time_ns[r][t] : 0) << '\n';
        }
    }
}

std::vector<TraceRow> read_trace_csv(std::istream& is, const std::string& source) {
    std::string line;
    if (!std::getline(is, line) || line != kTraceHeader) {
        throw std::runtime_error(source + ": missing or unexpected trace header");
    }
    std::vector<TraceRow> rows;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        try {
            if (f.size() != 9) throw std::invalid_argument("expected 9 fields");
            rows.push_back({std::string(f[0]), std::string(f[1]), parse_int<std::size_t>(f[2]),
                            parse_int<std::size_t>(f[3]), std::string(f[4]), parse_int<std::size_t>(f[5]),
                            parse_int<std::size_t>(f[6]), parse_double(f[7]), parse_int<std::int64_t>(f[8])});
            parse_double(f[4]);
        } catch (const std::exception& e) {
            throw std::runtime_error(source + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (rows.empty()) throw std::runtime_error(source + ": trace has no rows");
    return rows;
}

std::vector<PlotRow> aggregate_plot_rows(const std::vector<TraceRow>& rows) {
    struct Acc {
        std::vector<double> values;
    };
    using CellKey = std::tuple<std::string, std::string, std::size_t, std::size_t, std::string>;
    std::vector<CellKey> order;
    std::map<CellKey, std::map<std::size_t, Acc>> cells;
    for (const auto& r : rows) {
        CellKey key{r.method, r.fusion, r.k, r.c, r.pref1};
        auto [it, inserted] = cells.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second[r.iteration].values.push_back(r.cum_regret);
    }

    std::vector<PlotRow> out;
    for (const auto& key : order) {
        for (const auto& [iteration, acc] : cells.at(key)) {
            const auto n = static_cast<double>(acc.values.size());
            double mean = 0.0;
            for (const double v : acc.values) mean += v;
            mean /= n;
            double se = 0.0;
            if (acc.values.size() > 1) {
                double ss = 0.0;
                for (const double v : acc.values) ss += (v - mean) * (v - mean);
                se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
            }
            const auto& [method, fusion, k, c, pref1] = key;
            out.push_back({method, fusion, k, c, pref1, iteration, mean, se});
        }
    }
    return out;
}

void write_plot_csv(std::ostream& os, const std::vector<PlotRow>& rows) {
    os << kPlotHeader << '\n';
    for (const auto& r : rows) {
        os << r.method << ',' << r.fusion << ',' << r.k << ',' << r.c << ',' << r.pref1 << ',' << r.iteration << ','
           << format_double(r.mean_cum_regret) << ',' << format_double(r.stderr_cum_regret) << '\n';
    }
}

std::string summary_json(const RegretTrace& trace, bool include_timing) {
    const auto& cfg = trace.config;
    nlohmann::ordered_json j;
    j["method"] = std::string(to_string(cfg.agent.policy));
    j["fusion"] = cfg.agent.fusion_label();
    j["K"] = cfg.num_arms;
    j["C"] = cfg.context_dim;
    j["pref"] = {cfg.pref.p0(), cfg.pref.p1()};
    j["T"] = cfg.iterations;
    j["runs"] = cfg.mc_runs;
    j["epsilon"] = cfg.epsilon;
    j["n_samples"] = cfg.n_samples;
    j["seed"] = cfg.master_seed;
    j["mean_final_regret"] = trace.mean_final_regret();
    j["stderr_final_regret"] = trace.final_regret_stderr();
    if (include_timing) j["mean_selection_time_s"] = trace.mean_selection_time_s;
    return j.dump();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace aicmab
