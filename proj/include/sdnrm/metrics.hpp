#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdnrm/run_log.hpp"

namespace sdnrm {

enum class SuccessMode {
    PerPacket,    // each packet of a covered flow is one check
    PerInterval,  // each (flow, estimation interval) with traffic is one check
};

namespace detail {

// Active requirement of `pair` at time t, from the contract history.
class PedTimeline {
public:
    explicit PedTimeline(const RunLog& log) {
        for (const auto& c : log.contract_history) by_pair_[c.pair].push_back(c);
    }

    const ContractState* at(PairId pair, Time t) const {
        auto it = by_pair_.find(pair);
        if (it == by_pair_.end()) return nullptr;
        const ContractState* best = nullptr;
        // History is appended in time order, so the last entry at or before t wins.
        for (const auto& c : it->second) {
            if (c.at > t) break;
            best = &c;
        }
        return best ? best : &it->second.front();
    }

private:
    std::map<PairId, std::vector<ContractState>> by_pair_;
};

// Packet satisfied its contract. Host access delay sits outside the
// switch-to-switch requirement, so both ends of it are allowed for.
inline bool satisfied(const RunLog& log, const PedTimeline& peds, const PacketRecord& p, PairId pair,
                      bool strong_only) {
    if (!p.delivered()) return false;
    const ContractState* c = peds.at(pair, p.delivered_at);
    if (!c) return false;
    const Time ped = strong_only ? c->strong_ped : c->active_ped();
    return p.actual_delay <= ped + log.access_delay * 2;
}

inline double success_rate(const RunLog& log, SuccessMode mode, bool strong_only) {
    const PedTimeline peds(log);
    std::int64_t checks = 0;
    std::int64_t ok = 0;
    if (mode == SuccessMode::PerPacket) {
        for (const auto& p : log.packets) {
            if (p.fate == PacketFate::InFlightAtEnd || p.flow >= log.flows.size()) continue;
            const auto& pair = log.flows[p.flow].contract;
            if (!pair) continue;
            ++checks;
            if (satisfied(log, peds, p, *pair, strong_only)) ++ok;
        }
    } else {
        // (flow, interval index) -> all packets sent in it satisfied
        std::map<std::pair<FlowId, std::int64_t>, bool> windows;
        const std::int64_t width = std::max<std::int64_t>(log.estimation_interval.ns(), 1);
        for (const auto& p : log.packets) {
            if (p.fate == PacketFate::InFlightAtEnd || p.flow >= log.flows.size()) continue;
            const auto& pair = log.flows[p.flow].contract;
            if (!pair) continue;
            auto [it, fresh] = windows.try_emplace({p.flow, p.sent_at.ns() / width}, true);
            it->second = it->second && satisfied(log, peds, p, *pair, strong_only);
        }
        for (const auto& [key, good] : windows) {
            ++checks;
            if (good) ++ok;
        }
    }
    return checks == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(checks);
}

}  // namespace detail

// Fraction of finished packets of contract-covered flows that were delivered
// within the requirement active at delivery. Drops count as failures;
// packets still in flight at the end are not counted.
inline double compute_success_rate(const RunLog& log, SuccessMode mode = SuccessMode::PerPacket) {
    return detail::success_rate(log, mode, false);
}

// Same, but always against the strong requirement.
inline double compute_strong_success_rate(const RunLog& log, SuccessMode mode = SuccessMode::PerPacket) {
    return detail::success_rate(log, mode, true);
}

// Delivered bits per second of emulation time.
inline double compute_throughput(const RunLog& log) {
    if (log.emulation_time <= Time::zero()) return 0.0;
    std::int64_t bits = 0;
    for (const auto& p : log.packets) {
        if (p.delivered()) bits += p.length.value;
    }
    return static_cast<double>(bits) / log.emulation_time.seconds();
}

struct RestorationStats {
    std::vector<Time> totals;
    std::optional<double> mean_ns;  // absent when there were no restorations
};

inline RestorationStats compute_restoration_stats(const std::vector<RestorationRecord>& records) {
    RestorationStats s;
    if (records.empty()) return s;
    __int128 sum = 0;
    for (const auto& r : records) {
        s.totals.push_back(r.total);
        sum += r.total.ns();
    }
    s.mean_ns = static_cast<double>(sum) / static_cast<double>(records.size());
    return s;
}

struct PacketCounts {
    std::int64_t sent = 0;
    std::int64_t delivered = 0;
    std::int64_t dropped = 0;
    std::int64_t in_flight = 0;
};

inline PacketCounts count_packets(const RunLog& log) {
    PacketCounts c;
    for (const auto& p : log.packets) {
        ++c.sent;
        if (p.delivered()) ++c.delivered;
        else if (p.dropped()) ++c.dropped;
        else ++c.in_flight;
    }
    return c;
}

// Metrics of one run.
struct MetricsReport {
    std::string variant;
    std::uint64_t seed = 0;
    double success_rate = 0.0;
    double strong_success_rate = 0.0;
    double throughput_bps = 0.0;
    RestorationStats restoration;
    std::int64_t warnings = 0;
    PacketCounts packets;
};

inline MetricsReport compute_metrics(const RunLog& log, SuccessMode mode = SuccessMode::PerPacket) {
    MetricsReport r;
    r.variant = log.variant;
    r.seed = log.seed;
    r.success_rate = compute_success_rate(log, mode);
    r.strong_success_rate = compute_strong_success_rate(log, mode);
    r.throughput_bps = compute_throughput(log);
    r.restoration = compute_restoration_stats(log.restorations);
    r.warnings = static_cast<std::int64_t>(log.warnings.size());
    r.packets = count_packets(log);
    return r;
}

}  // namespace sdnrm
