#pragma once

#include <optional>
#include <vector>

#include "sdnrm/flow.hpp"
#include "sdnrm/llde.hpp"
#include "sdnrm/topology.hpp"
#include "sdnrm/variant.hpp"

namespace sdnrm {

struct RouteResult {
    Path path;
    Time ed{};  // estimated end-to-end delay (sum of link costs)

    friend bool operator==(const RouteResult&, const RouteResult&) = default;
};

namespace detail {

struct Label {
    Time cost = Time::max();
    std::size_t hops = 0;
    Path path;
    bool reached = false;
};

// Total order used for tie-breaking: cost, then hop count, then the switch
// sequence compared lexicographically.
inline bool better(const Label& x, const Label& y) {
    if (!y.reached) return x.reached;
    if (!x.reached) return false;
    if (x.cost != y.cost) return x.cost < y.cost;
    if (x.hops != y.hops) return x.hops < y.hops;
    return x.path < y.path;
}

}  // namespace detail

// Dijkstra over the directed cost graph restricted to Up links with a cost
// entry. Returns nullopt when dst is unreachable.
inline std::optional<RouteResult> find_path(const Topology& topo, const CostMatrix& costs, SwitchId src,
                                            SwitchId dst) {
    const std::size_t n = topo.switch_count();
    if (src >= n || dst >= n) throw ModelError("find_path: unknown switch");

    std::vector<detail::Label> label(n);
    std::vector<bool> settled(n, false);
    label[src] = {Time::zero(), 0, Path{src}, true};

    for (;;) {
        std::optional<SwitchId> u;
        for (SwitchId v = 0; v < n; ++v) {
            if (settled[v] || !label[v].reached) continue;
            if (!u || detail::better(label[v], label[*u])) u = v;
        }
        if (!u) break;
        settled[*u] = true;
        if (*u == dst) break;

        for (LinkId lid : topo.incident(*u)) {
            const Link& link = topo.link_at(lid);
            const SwitchId v = link.other(*u);
            if (!link.up() || settled[v]) continue;
            const auto& entry = costs.at(*u, v);
            if (!entry) continue;

            detail::Label cand;
            cand.reached = true;
            cand.cost = label[*u].cost + entry->cost;
            cand.hops = label[*u].hops + 1;
            cand.path = label[*u].path;
            cand.path.push_back(v);
            if (detail::better(cand, label[v])) label[v] = std::move(cand);
        }
    }

    if (!label[dst].reached) return std::nullopt;
    return RouteResult{std::move(label[dst].path), label[dst].cost};
}

// When the path finder runs for a given controller build. Every build
// routes new flows; periodic and fault-driven runs need the matching strategy.
struct RouteTriggers {
    bool on_flow_arrival = true;
    bool each_cycle = false;
    bool on_fault = false;
};

inline RouteTriggers route_triggers(const MechanismVariant& v) { return {true, v.proactive, v.reactive}; }

}  // namespace sdnrm
