#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdnrm/experiment.hpp"

namespace sdnrm {

inline constexpr const char* kVersion = "1.0.0";

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct ReportOptions {
    std::string scenario_hash;
    std::string success_mode = "per_packet";
    bool raw_link_delay = false;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline std::string metric_csv(const SweepResult& r, const std::function<std::string(const VariantSummary&)>& cell) {
    std::string out = "variant";
    for (std::size_t c = 0; c < r.cells.size(); ++c) out += "," + r.sweep.label(c);
    out += "\n";
    for (std::size_t v = 0; v < r.variants.size(); ++v) {
        out += r.variants[v];
        for (std::size_t c = 0; c < r.cells.size(); ++c) out += "," + cell(r.at(c, v));
        out += "\n";
    }
    return out;
}

}  // namespace detail

// Writes one CSV per metric (rows: variants, columns: swept values), a
// summary with per-seed detail, and a manifest. Output depends only on the
// inputs, so identical results give identical bytes.
inline std::vector<std::filesystem::path> emit_reports(const SweepResult& r, const std::filesystem::path& out_dir,
                                                       const ReportOptions& opts = {}) {
    using nlohmann::ordered_json;
    if (r.cells.empty() || r.variants.empty()) throw std::runtime_error("emit_reports: nothing to report");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        detail::write_file(out_dir / name, content);
        written.push_back(out_dir / name);
    };

    emit("success_rate.csv", detail::metric_csv(r, [](const VariantSummary& s) { return fixed(s.success_rate); }));
    emit("strong_success_rate.csv",
         detail::metric_csv(r, [](const VariantSummary& s) { return fixed(s.strong_success_rate); }));
    emit("throughput_mbps.csv",
         detail::metric_csv(r, [](const VariantSummary& s) { return fixed(s.throughput_bps / 1e6); }));
    emit("restoration_delay_ms.csv", detail::metric_csv(r, [](const VariantSummary& s) {
             return s.restoration_mean_ns ? fixed(*s.restoration_mean_ns / 1e6) : std::string("-");
         }));
    emit("warnings.csv", detail::metric_csv(r, [](const VariantSummary& s) { return fixed(s.warnings, 2); }));

    ordered_json summary;
    summary["scenario"] = r.scenario;
    summary["sweep"] = ordered_json::array();
    for (std::size_t c = 0; c < r.cells.size(); ++c) {
        ordered_json column;
        column["label"] = r.sweep.label(c);
        column["variants"] = ordered_json::array();
        for (std::size_t v = 0; v < r.variants.size(); ++v) {
            const VariantSummary& s = r.at(c, v);
            ordered_json row;
            row["variant"] = s.variant;
            row["success_rate"] = fixed(s.success_rate);
            row["strong_success_rate"] = fixed(s.strong_success_rate);
            row["throughput_mbps"] = fixed(s.throughput_bps / 1e6);
            row["restoration_mean_ms"] = s.restoration_mean_ns ? ordered_json(fixed(*s.restoration_mean_ns / 1e6))
                                                               : ordered_json(nullptr);
            row["warnings"] = fixed(s.warnings, 2);
            row["runs"] = ordered_json::array();
            for (const auto& m : s.runs) {
                ordered_json run;
                run["seed"] = m.seed;
                run["success_rate"] = fixed(m.success_rate);
                run["strong_success_rate"] = fixed(m.strong_success_rate);
                run["throughput_mbps"] = fixed(m.throughput_bps / 1e6);
                run["restorations_ms"] = ordered_json::array();
                for (Time t : m.restoration.totals) run["restorations_ms"].push_back(format_ms(t));
                run["warnings"] = m.warnings;
                run["packets"] = {{"sent", m.packets.sent},
                                  {"delivered", m.packets.delivered},
                                  {"dropped", m.packets.dropped},
                                  {"in_flight", m.packets.in_flight}};
                row["runs"].push_back(std::move(run));
            }
            column["variants"].push_back(std::move(row));
        }
        summary["sweep"].push_back(std::move(column));
    }
    emit("summary.json", summary.dump(2) + "\n");

    ordered_json manifest;
    manifest["tool"] = "sdnrm";
    manifest["version"] = kVersion;
    manifest["scenario"] = r.scenario;
    manifest["scenario_hash"] = opts.scenario_hash;
    manifest["variants"] = r.variants;
    manifest["seeds"] = r.seeds;
    manifest["columns"] = ordered_json::array();
    for (std::size_t c = 0; c < r.cells.size(); ++c) manifest["columns"].push_back(r.sweep.label(c));
    manifest["success_mode"] = opts.success_mode;
    manifest["link_delay_mode"] = opts.raw_link_delay ? "raw" : "one_way";
    emit("manifest.json", manifest.dump(2) + "\n");
    return written;
}

}  // namespace sdnrm
