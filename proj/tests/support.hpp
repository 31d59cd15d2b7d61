#pragma once

// Helpers shared by the unit tests and the acceptance binary: small
// topologies, a hand-rolled random generator, and brute-force oracles that
// do not reuse library code paths.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sdnrm/sdnrm.hpp"

namespace sdnrm::testing {

// Linear chain S1..Sn with one host on each end.
inline TopologySpec chain_spec(int n, Bandwidth cap, Time delay, Time control = microseconds(250)) {
    TopologySpec spec;
    for (int i = 1; i <= n; ++i) spec.switches.push_back({"S" + std::to_string(i), control, control});
    for (int i = 1; i < n; ++i) {
        spec.links.push_back({"S" + std::to_string(i), "S" + std::to_string(i + 1), cap, delay});
    }
    spec.hosts.push_back({"HA", "S1"});
    spec.hosts.push_back({"HB", "S" + std::to_string(n)});
    return spec;
}

inline Path chain_path(int n) {
    Path p;
    for (int i = 0; i < n; ++i) p.push_back(static_cast<SwitchId>(i));
    return p;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::int64_t between(std::int64_t lo, std::int64_t hi) { return uniform_int(gen_, lo, hi); }
    bool chance(int percent) { return between(0, 99) < percent; }

private:
    std::mt19937_64 gen_;
};

// Random connected-or-not graph on n switches with costs set directly.
struct RandomGraph {
    Topology topo;
    CostMatrix costs;
};

inline RandomGraph random_graph(Rng& rng, int n, int edge_percent) {
    TopologySpec spec;
    for (int i = 0; i < n; ++i) spec.switches.push_back({"N" + std::to_string(i)});
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.chance(edge_percent)) {
                spec.links.push_back({"N" + std::to_string(i), "N" + std::to_string(j), gbps(1), milliseconds(1)});
            }
        }
    }
    RandomGraph g{build_topology(spec), CostMatrix(static_cast<std::size_t>(n))};
    for (const Link& l : g.topo.links()) {
        // Small cost range so ties are common.
        for (auto [from, to] : {std::pair{l.a, l.b}, std::pair{l.b, l.a}}) {
            const Time c = microseconds(rng.between(1, 6) * 100);
            g.costs.set(from, to, CostEntry{c, Time::zero(), c, Time::zero()});
        }
    }
    return g;
}

// Minimum total cost over all simple paths, by exhaustive DFS.
inline std::optional<Time> brute_force_cost(const Topology& topo, const CostMatrix& costs, SwitchId src,
                                            SwitchId dst) {
    std::optional<std::int64_t> best;
    std::vector<bool> seen(topo.switch_count(), false);
    std::function<void(SwitchId, std::int64_t)> dfs = [&](SwitchId u, std::int64_t acc) {
        if (u == dst) {
            if (!best || acc < *best) best = acc;
            return;
        }
        seen[u] = true;
        for (SwitchId v = 0; v < topo.switch_count(); ++v) {
            if (seen[v]) continue;
            auto l = topo.find_link(u, v);
            if (!l || !topo.link_at(*l).up()) continue;
            const auto& e = costs.at(u, v);
            if (!e) continue;
            dfs(v, acc + e->cost.ns());
        }
        seen[u] = false;
    };
    dfs(src, 0);
    if (!best) return std::nullopt;
    return Time{*best};
}

// Direct link-delay arithmetic on the raw timestamps, independent of the library.
inline std::int64_t oneway_delay_ns(std::int64_t fwd_elapsed, std::int64_t rev_elapsed, std::int64_t rtt1,
                                  std::int64_t rtt2) {
    const std::int64_t raw = fwd_elapsed + rev_elapsed - rtt1 - rtt2;
    if (raw <= 0) return 0;
    return raw / 2 + raw % 2;
}

inline ProbeObservation probe(Time fwd_elapsed, Time rev_elapsed, Time rtt1, Time rtt2) {
    ProbeObservation o;
    o.lldp_send_time = seconds(1);
    o.lldp_return_time = seconds(1) + fwd_elapsed;
    o.reverse_lldp_send_time = seconds(1);
    o.reverse_lldp_return_time = seconds(1) + rev_elapsed;
    o.rtt_s1 = rtt1;
    o.rtt_s2 = rtt2;
    return o;
}

inline std::string scenario_dir() { return SDNRM_SCENARIO_DIR; }

}  // namespace sdnrm::testing
