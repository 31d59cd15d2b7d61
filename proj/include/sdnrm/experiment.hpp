#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdnrm/metrics.hpp"
#include "sdnrm/scenario.hpp"

namespace sdnrm {

// Seed-averaged metrics of one variant.
struct VariantSummary {
    std::string variant;
    std::vector<MetricsReport> runs;  // one per seed, in seed order
    double success_rate = 0.0;
    double strong_success_rate = 0.0;
    double throughput_bps = 0.0;
    double warnings = 0.0;
    std::optional<double> restoration_mean_ns;  // over all records of all seeds
    std::vector<Time> restorations;
};

inline VariantSummary summarize(std::string variant, std::vector<MetricsReport> runs) {
    VariantSummary s;
    s.variant = std::move(variant);
    s.runs = std::move(runs);
    if (s.runs.empty()) return s;
    __int128 sum = 0;
    for (const auto& r : s.runs) {
        s.success_rate += r.success_rate;
        s.strong_success_rate += r.strong_success_rate;
        s.throughput_bps += r.throughput_bps;
        s.warnings += static_cast<double>(r.warnings);
        for (Time t : r.restoration.totals) {
            s.restorations.push_back(t);
            sum += t.ns();
        }
    }
    const double n = static_cast<double>(s.runs.size());
    s.success_rate /= n;
    s.strong_success_rate /= n;
    s.throughput_bps /= n;
    s.warnings /= n;
    if (!s.restorations.empty()) {
        s.restoration_mean_ns = static_cast<double>(sum) / static_cast<double>(s.restorations.size());
    }
    return s;
}

inline std::vector<std::uint64_t> make_seeds(const Scenario& sc, int n) {
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < n; ++i) seeds.push_back(sc.seed + static_cast<std::uint64_t>(i));
    return seeds;
}

// Called with every finished run; lets callers inspect logs without keeping
// them all in memory.
using RunObserver = std::function<void(const RunLog&)>;

// One kernel run per (variant, seed); one summary per variant.
inline std::vector<VariantSummary> run_experiment(const Scenario& sc, const std::vector<MechanismVariant>& variants,
                                                  const std::vector<std::uint64_t>& seeds,
                                                  SuccessMode mode = SuccessMode::PerPacket,
                                                  const RunObserver& observer = {}) {
    std::vector<VariantSummary> out;
    for (const auto& v : variants) {
        std::vector<MetricsReport> runs;
        for (auto seed : seeds) {
            const RunLog log = run_scenario(sc, v, seed);
            if (observer) observer(log);
            runs.push_back(compute_metrics(log, mode));
        }
        out.push_back(summarize(std::string(v.name), std::move(runs)));
    }
    return out;
}

enum class SweepKind { None, Flows, Events };

struct Sweep {
    SweepKind kind = SweepKind::None;
    std::vector<int> values;

    std::string label(std::size_t i) const {
        switch (kind) {
            case SweepKind::None: return "all";
            case SweepKind::Flows: return "flows=" + std::to_string(values[i]);
            case SweepKind::Events: return "events=" + std::to_string(values[i]);
        }
        return "?";
    }
    std::size_t columns() const { return kind == SweepKind::None ? 1 : values.size(); }
};

// "flows=2..10", "events=1..5" or "flows=4" (single value).
inline Sweep parse_sweep(const std::string& text) {
    Sweep s;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ScenarioError(0, "sweep: expected flows=a..b or events=a..b");
    const std::string key = text.substr(0, eq);
    if (key == "flows") s.kind = SweepKind::Flows;
    else if (key == "events") s.kind = SweepKind::Events;
    else throw ScenarioError(0, "sweep: unknown parameter '" + key + "'");
    const std::string range = text.substr(eq + 1);
    const auto dots = range.find("..");
    const int lo = static_cast<int>(detail::parse_int(range.substr(0, dots), 0));
    const int hi = dots == std::string::npos ? lo : static_cast<int>(detail::parse_int(range.substr(dots + 2), 0));
    if (hi < lo) throw ScenarioError(0, "sweep: empty range");
    for (int v = lo; v <= hi; ++v) s.values.push_back(v);
    return s;
}

inline Scenario apply_sweep(const Scenario& sc, const Sweep& sweep, std::size_t column) {
    switch (sweep.kind) {
        case SweepKind::None: return sc;
        case SweepKind::Flows: return with_flow_count(sc, sweep.values.at(column));
        case SweepKind::Events: return with_event_count(sc, sweep.values.at(column));
    }
    return sc;
}

struct SweepResult {
    std::string scenario;
    Sweep sweep;
    std::vector<std::string> variants;
    std::vector<std::uint64_t> seeds;
    std::vector<std::vector<VariantSummary>> cells;  // [column][variant]

    const VariantSummary& at(std::size_t column, std::size_t variant) const { return cells.at(column).at(variant); }
};

inline SweepResult run_sweep(const Scenario& sc, const std::vector<MechanismVariant>& variants,
                             const std::vector<std::uint64_t>& seeds, const Sweep& sweep,
                             SuccessMode mode = SuccessMode::PerPacket, const RunObserver& observer = {}) {
    SweepResult r;
    r.scenario = sc.name;
    r.sweep = sweep;
    for (const auto& v : variants) r.variants.emplace_back(v.name);
    r.seeds = seeds;
    for (std::size_t c = 0; c < sweep.columns(); ++c) {
        r.cells.push_back(run_experiment(apply_sweep(sc, sweep, c), variants, seeds, mode, observer));
    }
    return r;
}

}  // namespace sdnrm
