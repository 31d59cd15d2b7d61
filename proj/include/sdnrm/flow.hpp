#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "sdnrm/error.hpp"
#include "sdnrm/topology.hpp"
#include "sdnrm/units.hpp"

namespace sdnrm {

using FlowId = std::uint32_t;

// Ordered switches from ingress to egress. A single-switch path is valid
// when source and destination share an attachment switch.
using Path = std::vector<SwitchId>;

struct Flow {
    FlowId id = 0;
    std::string name;
    HostId src_host = 0;
    HostId dst_host = 0;
    Bits packet_length{};
    Bits total_volume{};
    Time start_time{};
    Time inter_packet_gap{};

    // Full-size packets plus one shorter tail packet if the volume does not divide.
    std::int64_t packet_count() const {
        return (total_volume.value + packet_length.value - 1) / packet_length.value;
    }

    Bits length_of(std::int64_t seq) const {
        if (seq + 1 < packet_count()) return packet_length;
        const std::int64_t tail = total_volume.value - seq * packet_length.value;
        return Bits{tail};
    }
};

inline void validate_flow(const Flow& f, const Topology& topo) {
    if (f.packet_length.value <= 0) throw ModelError("flow '" + f.name + "': packet length must be positive");
    if (f.total_volume < f.packet_length) {
        throw ModelError("flow '" + f.name + "': total volume smaller than one packet");
    }
    if (f.src_host == f.dst_host) throw ModelError("flow '" + f.name + "': source equals destination");
    if (f.src_host >= topo.host_count() || f.dst_host >= topo.host_count()) {
        throw ModelError("flow '" + f.name + "': unknown host");
    }
    if (f.start_time < Time::zero() || f.inter_packet_gap < Time::zero()) {
        throw ModelError("flow '" + f.name + "': negative start time or gap");
    }
}

inline bool is_simple(const Path& p) {
    std::unordered_set<SwitchId> seen;
    for (auto s : p) {
        if (!seen.insert(s).second) return false;
    }
    return true;
}

// Simple, non-empty and every hop over an existing Up link.
inline bool path_usable(const Path& p, const Topology& topo) {
    if (p.empty() || !is_simple(p)) return false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        auto l = topo.find_link(p[i], p[i + 1]);
        if (!l || !topo.link_at(*l).up()) return false;
    }
    return true;
}

inline std::string path_to_string(const Path& p, const Topology& topo) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += '>';
        out += topo.name_of(p[i]);
    }
    return out;
}

}  // namespace sdnrm
