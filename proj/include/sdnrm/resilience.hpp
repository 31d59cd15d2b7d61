#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "sdnrm/contracts.hpp"
#include "sdnrm/llde.hpp"
#include "sdnrm/routing.hpp"
#include "sdnrm/topology.hpp"
#include "sdnrm/variant.hpp"

namespace sdnrm {

struct ResilienceConfig {
    // Path finder compute cost charged per invocation.
    Time recalculation = microseconds(100);
    // Port-status delivery delay for E1. Unset: the faster of the two
    // adjacent switches' switch->controller latencies.
    std::optional<Time> e1_detection_latency;
    // Install the best path even when it satisfies no contract (RS3).
    bool rs3_best_effort = false;
};

enum class EventKind { E1, E2 };

struct EventNotification {
    EventKind kind = EventKind::E1;
    LinkId link = 0;          // E1
    ContractId contract = 0;  // E2
    Time occurred_at{};
    Time delivered_at{};
};

inline EventNotification monitor_link_failure(const Topology& topo, LinkId link, Time occurred_at,
                                              const ResilienceConfig& cfg) {
    const Link& l = topo.link_at(link);
    const Time latency = cfg.e1_detection_latency.value_or(
        std::min(topo.switch_at(l.a).control_up, topo.switch_at(l.b).control_up));
    return {EventKind::E1, link, 0, occurred_at, occurred_at + latency};
}

// Contract edits happen inside the controller, so delivery is immediate.
inline EventNotification monitor_contract_change(const ContractChangeEvent& change) {
    return {EventKind::E2, 0, change.contract, change.at, change.at};
}

enum class Outcome { RS1Applied, RS2Applied, RS3Warned };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::RS1Applied: return "RS1";
        case Outcome::RS2Applied: return "RS1+RS2";
        case Outcome::RS3Warned: return "RS3";
    }
    return "?";
}

struct Decision {
    FaultReport fault;
    Outcome outcome = Outcome::RS3Warned;
    std::optional<RouteResult> route;  // best path found, if any
    bool install = false;              // route replaces the forwarding state
    std::optional<ContractKind> activate;  // contract kind to make active, if it changes
};

// Maps a reported fault to exactly one response:
//   best.ed <= strong.ped                 -> RS1 (strong reinstated if weak was active)
//   weak contracts and best.ed <= weak    -> RS1 + RS2
//   otherwise, or no path                 -> RS3
inline Decision control_logic(const FaultReport& fault, const MechanismVariant& variant, const ContractPair& pair,
                              const Topology& topo, const CostMatrix& costs, const ResilienceConfig& cfg) {
    Decision d;
    d.fault = fault;
    d.route = find_path(topo, costs, pair.strong.src, pair.strong.dst);
    if (!d.route) {
        d.outcome = Outcome::RS3Warned;
        return d;
    }
    if (d.route->ed <= pair.strong.ped) {
        d.outcome = Outcome::RS1Applied;
        d.install = true;
        if (pair.active_kind() != ContractKind::Strong) d.activate = ContractKind::Strong;
        return d;
    }
    if (variant.weak_contracts && d.route->ed <= pair.weak.ped) {
        d.outcome = Outcome::RS2Applied;
        d.install = true;
        if (pair.active_kind() != ContractKind::Weak) d.activate = ContractKind::Weak;
        return d;
    }
    d.outcome = Outcome::RS3Warned;
    d.install = cfg.rs3_best_effort;
    return d;
}

struct RestorationRecord {
    FaultReport fault;
    Time detection_delay{};
    Time recalculation_delay{};
    Time reassignment_delay{};
    Time total{};
    Outcome outcome = Outcome::RS1Applied;
};

inline RestorationRecord make_restoration_record(const FaultReport& fault, Time detection, Time recalculation,
                                                 Time reassignment, Outcome outcome) {
    return {fault, detection, recalculation, reassignment, detection + recalculation + reassignment, outcome};
}

// Rules go to every switch on the new path in parallel, so the slowest
// controller->switch hop bounds the install. Re-installing the current path
// costs nothing.
inline Time reassignment_delay(const Topology& topo, const Path& new_path, const Path* current) {
    if (current && *current == new_path) return Time::zero();
    Time worst = Time::zero();
    for (SwitchId s : new_path) worst = std::max(worst, topo.switch_at(s).control_down);
    return worst;
}

struct Rs1Plan {
    RestorationRecord record;
    Time installed_at{};  // forwarding switches to the new path at this time
};

// RS1: path recalculation then reassignment. `trigger` is when the event
// behind the fault happened; detection is measured from it.
inline Rs1Plan execute_rs1(const Topology& topo, const FaultReport& fault, const Path& new_path,
                           const Path* current, Time trigger, const ResilienceConfig& cfg, Outcome outcome) {
    const Time detection = fault.detected_at - trigger;
    const Time reassign = reassignment_delay(topo, new_path, current);
    Rs1Plan plan;
    plan.record = make_restoration_record(fault, detection, cfg.recalculation, reassign, outcome);
    plan.installed_at = fault.detected_at + cfg.recalculation + reassign;
    return plan;
}

// RS2: fall back to the weak contract. No-op if it is already active.
inline bool execute_rs2(ContractStore& store, PairId pair) { return store.switch_active(pair, ContractKind::Weak); }

struct Warning {
    ContractId contract = 0;
    std::optional<Time> best_ed;  // nullopt: no path at all
    Time at{};
};

inline Warning execute_rs3(const FaultReport& fault, const std::optional<RouteResult>& best, Time now) {
    return {fault.contract, best ? std::optional<Time>(best->ed) : std::nullopt, now};
}

// Periodic evaluation at an estimation boundary: observe every active
// contract on its current path and run control_logic for each fault.
// Pairs without an installed path are skipped. Non-proactive builds never
// evaluate here.
inline std::vector<Decision> proactive_cycle(const MechanismVariant& variant, const ContractStore& store,
                                             std::span<const std::optional<Path>> current_paths,
                                             const Topology& topo, const CostMatrix& costs, Time now,
                                             const ResilienceConfig& cfg) {
    std::vector<Decision> out;
    if (!variant.proactive) return out;
    for (PairId p = 0; p < store.size() && p < current_paths.size(); ++p) {
        if (!current_paths[p]) continue;
        const ContractPair& pair = store.pair(p);
        const auto ed = estimate_path_delay(*current_paths[p], costs);
        if (auto fault = observe(pair.active(), ed, now, FaultCause::EstimationCycle)) {
            out.push_back(control_logic(*fault, variant, pair, topo, costs, cfg));
        }
    }
    return out;
}

}  // namespace sdnrm
