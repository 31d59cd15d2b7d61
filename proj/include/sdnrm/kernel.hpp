#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "sdnrm/contracts.hpp"
#include "sdnrm/event_queue.hpp"
#include "sdnrm/flow.hpp"
#include "sdnrm/llde.hpp"
#include "sdnrm/resilience.hpp"
#include "sdnrm/routing.hpp"
#include "sdnrm/run_log.hpp"
#include "sdnrm/topology.hpp"
#include "sdnrm/variant.hpp"

namespace sdnrm {

struct KernelConfig {
    Time emulation_time = seconds(150);
    Time estimation_interval = seconds(10);
    LldeConfig llde;
    ResilienceConfig resilience;
    MechanismVariant variant = kRM;
    // Packets allowed to wait behind the one in service at an egress port;
    // 0 means unbounded.
    std::size_t queue_limit = 0;
    // Fixed host<->switch delay, applied once at each end.
    Time access_delay = Time::zero();
    std::uint64_t seed = 0;
};

namespace event {
struct FlowStart { FlowId flow; };
struct FlowEmit { FlowId flow; std::int64_t seq; };
struct HopArrival {
    std::uint32_t packet;
    std::uint32_t hop;       // index into the packet's path of the switch reached
    std::uint64_t link_gen;  // down_transitions of the link just crossed, at send time
};
struct CycleBoundary { std::uint64_t index; };
struct LinkChange { LinkId link; LinkState state; };
struct ContractChange { ContractId contract; Time ped; };
struct E1Delivery { EventNotification note; };
struct RuleInstalled { std::uint32_t route; PathIndex path; };
struct ContractActivation { PairId pair; ContractKind kind; };
}  // namespace event

using SimPayload = std::variant<event::FlowStart, event::FlowEmit, event::HopArrival, event::CycleBoundary,
                                event::LinkChange, event::ContractChange, event::E1Delivery, event::RuleInstalled,
                                event::ContractActivation>;

// Deterministic packet-level simulation of the data plane plus the embedded
// controller (estimator, observers, monitors, resilience manager). One
// instance is one run; nothing is shared between instances.
class Kernel {
public:
    Kernel(Topology topo, std::vector<Flow> flows, ContractStore contracts, KernelConfig cfg)
        : topo_(std::move(topo)), flows_(std::move(flows)), store_(std::move(contracts)), cfg_(cfg),
          egress_(topo_.link_count() * 2), costs_(topo_.switch_count()) {
        if (cfg_.estimation_interval <= Time::zero()) throw ModelError("estimation interval must be positive");
        log_.variant = std::string(cfg_.variant.name);
        log_.seed = cfg_.seed;
        log_.emulation_time = cfg_.emulation_time;
        log_.estimation_interval = cfg_.estimation_interval;
        log_.access_delay = cfg_.access_delay;

        // The first cost matrix exists before any flow asks for a route.
        queue_.schedule(Time::zero(), event::CycleBoundary{0});
        for (PairId p = 0; p < store_.size(); ++p) {
            const auto& pair = store_.pair(p);
            const std::uint32_t r = route_for(pair.strong.src, pair.strong.dst);
            routes_[r].contract = p;
            pair_route_.push_back(r);
            log_contract_state(Time::zero(), p);
        }
        for (FlowId i = 0; i < flows_.size(); ++i) {
            Flow& f = flows_[i];
            f.id = i;
            validate_flow(f, topo_);
            const std::uint32_t r =
                route_for(topo_.host_at(f.src_host).attached_to, topo_.host_at(f.dst_host).attached_to);
            flow_route_.push_back(r);
            log_.flows.push_back({i, f.name, routes_[r].contract, f.total_volume});
            queue_.schedule(f.start_time, event::FlowStart{i});
        }
    }

    // Data-plane state change at `at` (E1 when it goes down).
    void inject_link_state(Time at, SwitchId a, SwitchId b, LinkState state) {
        auto link = topo_.find_link(a, b);
        if (!link) throw ModelError("injection: no link " + topo_.name_of(a) + "-" + topo_.name_of(b));
        queue_.schedule(at, event::LinkChange{*link, state});
    }

    // Run-time requirement update (E2) at `at`.
    void inject_contract_change(Time at, ContractId contract, Time ped) {
        if (pair_of(contract) >= store_.size()) throw ModelError("injection: unknown contract");
        if (ped <= Time::zero()) throw ModelError("injection: ped must be positive");
        queue_.schedule(at, event::ContractChange{contract, ped});
    }

    // Sends one packet of `flow` along an explicit path, bypassing the
    // controller's forwarding state. Returns the packet's index in the log.
    std::uint32_t transmit_packet(FlowId flow, const Path& path, Time at, std::optional<Bits> length = {}) {
        if (flow >= flows_.size()) throw ModelError("transmit_packet: unknown flow");
        if (at < queue_.now()) throw SimulationError("transmit_packet: time in the past");
        const auto idx = static_cast<std::uint32_t>(log_.packets.size());
        PacketRecord rec;
        rec.flow = flow;
        rec.length = length.value_or(flows_[flow].packet_length);
        rec.sent_at = at;
        rec.path = log_.intern(path);
        log_.packets.push_back(rec);
        queue_.schedule(at + cfg_.access_delay, event::HopArrival{idx, 0, 0});
        return idx;
    }

    void run_until(Time t_end) {
        queue_.run_until(t_end, [this](Time now, SimPayload& p) {
            std::visit([&](auto& ev) { handle(now, ev); }, p);
        });
    }

    void run() { run_until(cfg_.emulation_time); }

    Time now() const { return queue_.now(); }
    const Topology& topology() const { return topo_; }
    const CostMatrix& costs() const { return costs_; }
    const ContractStore& contracts() const { return store_; }
    const RunLog& log() const { return log_; }
    const KernelConfig& config() const { return cfg_; }

    // Path currently forwarding traffic between two switches, if any.
    std::optional<Path> installed_path(SwitchId src, SwitchId dst) const {
        for (const auto& r : routes_) {
            if (r.src == src && r.dst == dst && r.installed != kNoPath) return log_.paths[r.installed];
        }
        return std::nullopt;
    }

    // Closes the run: packets still travelling are marked as such.
    RunLog finish() {
        for (auto& p : log_.packets) {
            if (p.fate == PacketFate::InFlightAtEnd) p.actual_delay = Time::zero();
        }
        return std::move(log_);
    }

private:
    struct Route {
        SwitchId src = 0;
        SwitchId dst = 0;
        std::optional<PairId> contract;
        std::optional<Path> planned;  // latest controller decision
        PathIndex installed = kNoPath;
        bool faulted = false;         // inside a fault episode
        std::optional<Time> trigger;  // earliest unhandled event affecting the route
    };

    struct Egress {
        Time busy_until{};
        std::deque<Time> waiting;  // service start times of queued packets
    };

    struct Channel {
        const Kernel* k;
        Time egress_wait(SwitchId from, SwitchId to, Time at) const {
            const auto link = k->topo_.find_link(from, to);
            if (!link) return Time::zero();
            const Egress& e = k->egress_[egress_index(k->topo_, *link, from)];
            return e.busy_until > at ? e.busy_until - at : Time::zero();
        }
    };

    static std::size_t egress_index(const Topology& topo, LinkId link, SwitchId from) {
        return static_cast<std::size_t>(link) * 2 + (topo.link_at(link).a == from ? 0 : 1);
    }

    std::uint32_t route_for(SwitchId src, SwitchId dst) {
        for (std::uint32_t i = 0; i < routes_.size(); ++i) {
            if (routes_[i].src == src && routes_[i].dst == dst) return i;
        }
        Route r;
        r.src = src;
        r.dst = dst;
        routes_.push_back(std::move(r));
        return static_cast<std::uint32_t>(routes_.size() - 1);
    }

    // ---- logging helpers ----

    void log_contract_state(Time at, PairId p) {
        const auto& pair = store_.pair(p);
        log_.contract_history.push_back({at, p, pair.active_kind(), pair.strong.ped, pair.weak.ped});
    }

    void log_route(Time at, const Route& r, const RouteResult& res, const char* reason) {
        RouteRecord rec{at, r.src, r.dst, log_.intern(res.path), res.ed, {}, costs_.version, reason};
        for (std::size_t i = 0; i + 1 < res.path.size(); ++i) {
            rec.hop_costs.push_back(costs_.at(res.path[i], res.path[i + 1])->cost);
        }
        log_.routes.push_back(std::move(rec));
    }

    void drop(std::uint32_t packet, PacketFate why) { log_.packets[packet].fate = why; }

    // ---- data plane ----

    void handle(Time now, event::FlowStart& ev) {
        on_flow_arrival(now, flow_route_[ev.flow]);
        queue_.schedule(now, event::FlowEmit{ev.flow, 0});
    }

    void handle(Time now, event::FlowEmit& ev) {
        const Flow& f = flows_[ev.flow];
        const Route& r = routes_[flow_route_[ev.flow]];
        const auto idx = static_cast<std::uint32_t>(log_.packets.size());
        PacketRecord rec;
        rec.flow = ev.flow;
        rec.length = f.length_of(ev.seq);
        rec.sent_at = now;
        rec.path = r.installed;
        log_.packets.push_back(rec);
        if (r.installed == kNoPath) {
            drop(idx, PacketFate::NoRoute);
        } else {
            queue_.schedule(now + cfg_.access_delay, event::HopArrival{idx, 0, 0});
        }
        if (ev.seq + 1 < f.packet_count()) {
            const Time next = now + f.inter_packet_gap;
            if (next <= cfg_.emulation_time) queue_.schedule(next, event::FlowEmit{ev.flow, ev.seq + 1});
        }
    }

    void handle(Time now, event::HopArrival& ev) {
        PacketRecord& rec = log_.packets[ev.packet];
        const Path& path = log_.paths[rec.path];

        if (ev.hop > 0) {
            const LinkId crossed = *topo_.find_link(path[ev.hop - 1], path[ev.hop]);
            const Link& l = topo_.link_at(crossed);
            if (!l.up() || l.down_transitions != ev.link_gen) {
                drop(ev.packet, PacketFate::LinkDown);
                return;
            }
        }
        if (ev.hop + 1 == path.size()) {
            rec.fate = PacketFate::Delivered;
            rec.delivered_at = now + cfg_.access_delay;
            rec.actual_delay = rec.delivered_at - rec.sent_at;
            return;
        }

        const auto link_id = topo_.find_link(path[ev.hop], path[ev.hop + 1]);
        if (!link_id || !topo_.link_at(*link_id).up()) {
            drop(ev.packet, PacketFate::LinkDown);
            return;
        }
        const Link& link = topo_.link_at(*link_id);
        Egress& eg = egress_[egress_index(topo_, *link_id, path[ev.hop])];
        while (!eg.waiting.empty() && eg.waiting.front() <= now) eg.waiting.pop_front();
        if (cfg_.queue_limit > 0 && eg.waiting.size() >= cfg_.queue_limit) {
            drop(ev.packet, PacketFate::QueueOverflow);
            return;
        }
        const Time start = std::max(now, eg.busy_until);
        const Time td = transmission_delay(rec.length, link.capacity);
        eg.busy_until = start + td;
        if (start > now) eg.waiting.push_back(start);
        queue_.schedule(start + td + link.propagation_delay,
                        event::HopArrival{ev.packet, ev.hop + 1, link.down_transitions});
    }

    void handle(Time now, event::LinkChange& ev) {
        const Link& l = topo_.link_at(ev.link);
        if (!topo_.set_link_state(l.a, l.b, ev.state)) return;
        if (ev.state == LinkState::Up) return;

        for (std::size_t d = 0; d < 2; ++d) egress_[ev.link * 2 + d] = Egress{now, {}};
        for (auto& r : routes_) {
            if (!r.contract || !r.planned || !uses_link(*r.planned, l)) continue;
            if (!r.trigger) r.trigger = now;
            log_.annotations.push_back({now, *r.contract, "no_events_between_intervals"});
        }
        const EventNotification note = monitor_link_failure(topo_, ev.link, now, cfg_.resilience);
        queue_.schedule(note.delivered_at, event::E1Delivery{note});
    }

    static bool uses_link(const Path& p, const Link& l) {
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            if ((p[i] == l.a && p[i + 1] == l.b) || (p[i] == l.b && p[i + 1] == l.a)) return true;
        }
        return false;
    }

    void handle(Time, event::RuleInstalled& ev) { routes_[ev.route].installed = ev.path; }

    void handle(Time now, event::ContractActivation& ev) {
        if (store_.switch_active(ev.pair, ev.kind)) log_contract_state(now, ev.pair);
    }

    // ---- controller ----

    void install(Time at, std::uint32_t route, const Path& path) {
        queue_.schedule(at, event::RuleInstalled{route, log_.intern(path)});
    }

    void on_flow_arrival(Time now, std::uint32_t ri) {
        Route& r = routes_[ri];
        const auto best = find_path(topo_, costs_, r.src, r.dst);
        if (!best) return;
        log_route(now, r, *best, "arrival");
        if (!r.planned) {
            r.planned = best->path;
            r.installed = log_.intern(best->path);
            return;
        }
        const auto current = estimate_path_delay(*r.planned, costs_);
        if (!r.faulted && best->path != *r.planned && (!current || best->ed < *current)) {
            r.planned = best->path;
            install(now, ri, best->path);
        }
    }

    void handle(Time now, event::CycleBoundary& ev) {
        EstimationCycle cycle = run_estimation_cycle(topo_, Channel{this}, now, cfg_.llde, ev.index);
        costs_ = std::move(cycle.costs);
        log_.costs.insert(log_.costs.end(), cycle.records.begin(), cycle.records.end());
        log_.noise.insert(log_.noise.end(), cycle.noise.begin(), cycle.noise.end());

        if (cfg_.variant.proactive) {
            std::vector<std::optional<Path>> current(store_.size());
            for (PairId p = 0; p < store_.size(); ++p) current[p] = routes_[pair_route_[p]].planned;
            const auto decisions =
                proactive_cycle(cfg_.variant, store_, current, topo_, costs_, now, cfg_.resilience);
            std::vector<bool> faulted(store_.size(), false);
            for (const auto& d : decisions) {
                faulted[pair_of(d.fault.contract)] = true;
                apply_decision(now, d);
            }
            for (PairId p = 0; p < store_.size(); ++p) {
                Route& r = routes_[pair_route_[p]];
                if (!r.planned || faulted[p]) continue;
                r.faulted = false;
                r.trigger.reset();
                reoptimize(now, pair_route_[p]);
            }
            for (std::uint32_t ri = 0; ri < routes_.size(); ++ri) {
                if (!routes_[ri].contract && routes_[ri].planned) reoptimize(now, ri);
            }
        }

        const Time next = now + cfg_.estimation_interval;
        if (next <= cfg_.emulation_time) queue_.schedule(next, event::CycleBoundary{ev.index + 1});
    }

    // Periodic re-optimisation of a route that currently meets its contract
    // (or has none): adopt a strictly better path, and go back to the strong
    // contract once the best path satisfies it again.
    void reoptimize(Time now, std::uint32_t ri) {
        Route& r = routes_[ri];
        const auto best = find_path(topo_, costs_, r.src, r.dst);
        if (!best) return;
        const auto current = estimate_path_delay(*r.planned, costs_);
        bool adopt = best->path != *r.planned && (!current || best->ed < *current);

        if (r.contract) {
            const ContractPair& pair = store_.pair(*r.contract);
            if (pair.active_kind() == ContractKind::Weak && best->ed <= pair.strong.ped) {
                queue_.schedule(now + cfg_.resilience.recalculation,
                                event::ContractActivation{*r.contract, ContractKind::Strong});
                adopt = best->path != *r.planned;
            }
        }
        if (!adopt) return;
        log_route(now, r, *best, "periodic");
        const Time at = now + cfg_.resilience.recalculation + reassignment_delay(topo_, best->path, &*r.planned);
        r.planned = best->path;
        install(at, ri, best->path);
    }

    void apply_decision(Time now, const Decision& d) {
        const PairId p = pair_of(d.fault.contract);
        const std::uint32_t ri = pair_route_[p];
        Route& r = routes_[ri];

        log_.faults.push_back(d.fault);
        log_.decisions.push_back(
            {now, d.fault.contract, d.outcome, d.route ? std::optional<Time>(d.route->ed) : std::nullopt});

        const Time trigger = r.trigger.value_or(now);
        const bool new_episode = !r.faulted;
        r.faulted = true;
        r.trigger.reset();

        RestorationRecord record;
        if (d.install && d.route) {
            log_route(now, r, *d.route, "restoration");
            const Rs1Plan plan = execute_rs1(topo_, d.fault, d.route->path, r.planned ? &*r.planned : nullptr,
                                             trigger, cfg_.resilience, d.outcome);
            record = plan.record;
            if (!r.planned || *r.planned != d.route->path) install(plan.installed_at, ri, d.route->path);
            r.planned = d.route->path;
        } else {
            record = make_restoration_record(d.fault, now - trigger, cfg_.resilience.recalculation, Time::zero(),
                                             d.outcome);
        }
        if (d.activate) {
            queue_.schedule(now + cfg_.resilience.recalculation, event::ContractActivation{p, *d.activate});
        }
        if (d.outcome == Outcome::RS3Warned) log_.warnings.push_back(execute_rs3(d.fault, d.route, now));
        if (new_episode) log_.restorations.push_back(record);
    }

    // Observer check of one route's active contract outside the cycle.
    void evaluate_now(Time now, std::uint32_t ri, FaultCause cause) {
        Route& r = routes_[ri];
        if (!r.contract || !r.planned) return;
        const ContractPair& pair = store_.pair(*r.contract);
        const auto fault = observe(pair.active(), estimate_path_delay(*r.planned, costs_), now, cause);
        if (!fault) {
            r.faulted = false;
            r.trigger.reset();
            return;
        }
        apply_decision(now, control_logic(*fault, cfg_.variant, pair, topo_, costs_, cfg_.resilience));
    }

    void handle(Time now, event::E1Delivery& ev) {
        log_.notifications.push_back(ev.note);
        if (!cfg_.variant.reactive) return;
        const Link& l = topo_.link_at(ev.note.link);
        if (l.up()) return;  // recovered before the port status arrived
        costs_.erase_link(l.a, l.b);
        for (std::uint32_t ri = 0; ri < routes_.size(); ++ri) evaluate_now(now, ri, FaultCause::LinkFailureEvent);
    }

    void handle(Time now, event::ContractChange& ev) {
        const auto change = store_.modify_contract(ev.contract, ev.ped, now);
        if (!change) return;
        const PairId p = pair_of(ev.contract);
        log_contract_state(now, p);
        Route& r = routes_[pair_route_[p]];
        if (!r.trigger) r.trigger = now;
        log_.annotations.push_back({now, p, "no_events_between_intervals"});
        log_.notifications.push_back(monitor_contract_change(*change));
        if (cfg_.variant.reactive) evaluate_now(now, pair_route_[p], FaultCause::ContractChangeEvent);
    }

    Topology topo_;
    std::vector<Flow> flows_;
    ContractStore store_;
    KernelConfig cfg_;
    EventQueue<SimPayload> queue_;
    std::vector<Egress> egress_;
    CostMatrix costs_;
    std::vector<Route> routes_;
    std::vector<std::uint32_t> pair_route_;
    std::vector<std::uint32_t> flow_route_;
    RunLog log_;
};

}  // namespace sdnrm
