#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sdnrm/flow.hpp"
#include "sdnrm/topology.hpp"
#include "sdnrm/units.hpp"

namespace sdnrm {

// One directed LLDP traversal pair plus the two Echo round trips. The
// reverse probe travels s2 -> s1 in the same cycle.
struct ProbeObservation {
    SwitchId s1 = 0;
    SwitchId s2 = 0;
    Time lldp_send_time{};
    Time lldp_return_time{};
    Time reverse_lldp_send_time{};
    Time reverse_lldp_return_time{};
    Time rtt_s1{};
    Time rtt_s2{};
};

enum class LinkDelayMode {
    OneWay,  // residual sum halved
    Raw,     // residual sum as printed, both directions together
};

struct LinkDelayEstimate {
    Time delay{};
    bool clamped = false;  // raw residual was negative
};

// Control-channel latency is taken as half of each Echo RTT; what is left of
// the two LLDP traversals is the link delay in both directions.
inline LinkDelayEstimate estimate_link_delay(const ProbeObservation& obs, LinkDelayMode mode = LinkDelayMode::OneWay) {
    const std::int64_t raw = (obs.lldp_return_time - obs.lldp_send_time).ns() +
                             (obs.reverse_lldp_return_time - obs.reverse_lldp_send_time).ns() -
                             obs.rtt_s1.ns() - obs.rtt_s2.ns();
    if (raw < 0) return {Time::zero(), true};
    if (mode == LinkDelayMode::Raw) return {Time{raw}, false};
    return {Time{(raw + 1) / 2}, false};
}

constexpr Time link_cost(Time td_sender, Time link_delay) { return td_sender + link_delay; }

struct CostEntry {
    Time link_delay{};
    Time transmission_delay{};
    Time cost{};
    Time last_updated{};
};

// Directed per-link costs held by the controller. Entries exist only for
// links that answered the last probe round and have not been reported down
// since.
class CostMatrix {
public:
    CostMatrix() = default;
    explicit CostMatrix(std::size_t switches) : n_(switches), cells_(switches * switches) {}

    std::size_t switch_count() const { return n_; }

    const std::optional<CostEntry>& at(SwitchId from, SwitchId to) const { return cells_.at(index(from, to)); }

    void set(SwitchId from, SwitchId to, const CostEntry& e) { cells_.at(index(from, to)) = e; }

    void erase_link(SwitchId a, SwitchId b) {
        cells_.at(index(a, b)).reset();
        cells_.at(index(b, a)).reset();
    }

    std::size_t entry_count() const {
        std::size_t c = 0;
        for (const auto& e : cells_) c += e.has_value();
        return c;
    }

    // Counter bumped by every refresh; lets logs refer to a matrix version.
    std::uint64_t version = 0;

private:
    std::size_t index(SwitchId from, SwitchId to) const {
        if (from >= n_ || to >= n_) throw ModelError("cost matrix index out of range");
        return static_cast<std::size_t>(from) * n_ + to;
    }

    std::size_t n_ = 0;
    std::vector<std::optional<CostEntry>> cells_;
};

// Sum of directed link costs along the path; nullopt if any hop lacks an
// entry (link down or matrix stale).
inline std::optional<Time> estimate_path_delay(const Path& path, const CostMatrix& costs) {
    Time total = Time::zero();
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto& e = costs.at(path[i], path[i + 1]);
        if (!e) return std::nullopt;
        total += e->cost;
    }
    return total;
}

struct LldeConfig {
    Bits probe_packet_length = bytes(1500);
    LinkDelayMode mode = LinkDelayMode::OneWay;
};

// Structured record of one matrix entry produced by a cycle.
struct CostRecord {
    std::uint64_t cycle = 0;
    Time at{};
    SwitchId from = 0;
    SwitchId to = 0;
    Time link_delay{};
    Time transmission_delay{};
    Time cost{};
};

struct NoiseWarning {
    Time at{};
    SwitchId s1 = 0;
    SwitchId s2 = 0;
};

struct EstimationCycle {
    CostMatrix costs;
    std::vector<ProbeObservation> observations;
    std::vector<CostRecord> records;
    std::vector<NoiseWarning> noise;
};

// Data-plane view the probes travel through. A probe entering the egress of
// from->to at `at` waits behind whatever is already queued there.
struct IdleChannel {
    Time egress_wait(SwitchId, SwitchId, Time) const { return Time::zero(); }
};

template <class Channel>
ProbeObservation simulate_probe(const Topology& topo, const Channel& channel, const Link& link, Time now) {
    const Switch& sw1 = topo.switch_at(link.a);
    const Switch& sw2 = topo.switch_at(link.b);

    ProbeObservation obs;
    obs.s1 = link.a;
    obs.s2 = link.b;

    const Time at_s1 = now + sw1.control_down;
    const Time at_s2_fwd = at_s1 + channel.egress_wait(link.a, link.b, at_s1) + link.propagation_delay;
    obs.lldp_send_time = now;
    obs.lldp_return_time = at_s2_fwd + sw2.control_up;

    const Time at_s2 = now + sw2.control_down;
    const Time at_s1_rev = at_s2 + channel.egress_wait(link.b, link.a, at_s2) + link.propagation_delay;
    obs.reverse_lldp_send_time = now;
    obs.reverse_lldp_return_time = at_s1_rev + sw1.control_up;

    obs.rtt_s1 = sw1.control_down + sw1.control_up;
    obs.rtt_s2 = sw2.control_down + sw2.control_up;
    return obs;
}

// One estimation round at `now`: probe every Up link in both directions and
// rebuild the matrix from scratch. Links that are down yield no entry.
template <class Channel>
EstimationCycle run_estimation_cycle(const Topology& topo, const Channel& channel, Time now,
                                     const LldeConfig& config, std::uint64_t cycle_index) {
    EstimationCycle out;
    out.costs = CostMatrix(topo.switch_count());
    out.costs.version = cycle_index;

    for (const Link& link : topo.links()) {
        if (!link.up()) continue;
        const ProbeObservation obs = simulate_probe(topo, channel, link, now);
        const LinkDelayEstimate ld = estimate_link_delay(obs, config.mode);
        if (ld.clamped) out.noise.push_back({now, link.a, link.b});
        out.observations.push_back(obs);

        const Time td = transmission_delay(config.probe_packet_length, link.capacity);
        const CostEntry entry{ld.delay, td, link_cost(td, ld.delay), now};
        out.costs.set(link.a, link.b, entry);
        out.costs.set(link.b, link.a, entry);
        out.records.push_back({cycle_index, now, link.a, link.b, ld.delay, td, entry.cost});
        out.records.push_back({cycle_index, now, link.b, link.a, ld.delay, td, entry.cost});
    }
    return out;
}

}  // namespace sdnrm
