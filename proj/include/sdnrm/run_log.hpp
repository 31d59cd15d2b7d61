#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdnrm/contracts.hpp"
#include "sdnrm/flow.hpp"
#include "sdnrm/llde.hpp"
#include "sdnrm/resilience.hpp"

namespace sdnrm {

enum class PacketFate { Delivered, LinkDown, QueueOverflow, NoRoute, InFlightAtEnd };

inline const char* to_string(PacketFate f) {
    switch (f) {
        case PacketFate::Delivered: return "delivered";
        case PacketFate::LinkDown: return "link_down";
        case PacketFate::QueueOverflow: return "queue_overflow";
        case PacketFate::NoRoute: return "no_route";
        case PacketFate::InFlightAtEnd: return "in_flight";
    }
    return "?";
}

using PathIndex = std::uint32_t;
inline constexpr PathIndex kNoPath = ~PathIndex{0};

struct PacketRecord {
    FlowId flow = 0;
    Bits length{};
    Time sent_at{};
    Time delivered_at{};  // meaningful only when delivered
    Time actual_delay{};
    PacketFate fate = PacketFate::InFlightAtEnd;
    PathIndex path = kNoPath;  // into RunLog::paths

    bool delivered() const { return fate == PacketFate::Delivered; }
    bool dropped() const { return fate != PacketFate::Delivered && fate != PacketFate::InFlightAtEnd; }
};

struct FlowInfo {
    FlowId id = 0;
    std::string name;
    std::optional<PairId> contract;  // contract pair covering the flow's switch pair
    Bits total_volume{};
};

// Active requirement of a contract pair from `at` onwards.
struct ContractState {
    Time at{};
    PairId pair = 0;
    ContractKind active = ContractKind::Strong;
    Time strong_ped{};
    Time weak_ped{};

    Time active_ped() const { return active == ContractKind::Strong ? strong_ped : weak_ped; }
};

struct RouteRecord {
    Time at{};
    SwitchId src = 0;
    SwitchId dst = 0;
    PathIndex path = kNoPath;
    Time ed{};
    std::vector<Time> hop_costs;
    std::uint64_t matrix_version = 0;
    std::string reason;
};

struct DecisionRecord {
    Time at{};
    ContractId contract = 0;
    Outcome outcome = Outcome::RS3Warned;
    std::optional<Time> best_ed;
};

struct Annotation {
    Time at{};
    PairId pair = 0;
    std::string tag;
};

// Everything a run produces. Metrics are computed from this alone, so a
// log read back from disk yields the same numbers as the live one.
struct RunLog {
    std::string variant;
    std::uint64_t seed = 0;
    Time emulation_time{};
    Time estimation_interval{};
    Time access_delay{};
    std::vector<FlowInfo> flows;
    std::vector<Path> paths;
    std::vector<PacketRecord> packets;
    std::vector<CostRecord> costs;
    std::vector<NoiseWarning> noise;
    std::vector<RouteRecord> routes;
    std::vector<EventNotification> notifications;
    std::vector<FaultReport> faults;
    std::vector<DecisionRecord> decisions;
    std::vector<RestorationRecord> restorations;
    std::vector<Warning> warnings;
    std::vector<ContractState> contract_history;
    std::vector<Annotation> annotations;

    PathIndex intern(const Path& p) {
        auto [it, fresh] = path_index_.try_emplace(p, static_cast<PathIndex>(paths.size()));
        if (fresh) paths.push_back(p);
        return it->second;
    }

private:
    std::map<Path, PathIndex> path_index_;
};

// --- JSON lines persistence -------------------------------------------------

namespace detail {

using nlohmann::json;

inline json opt_time(const std::optional<Time>& t) { return t ? json(t->ns()) : json(nullptr); }
inline std::optional<Time> read_opt_time(const json& j) {
    if (j.is_null()) return std::nullopt;
    return Time{j.get<std::int64_t>()};
}
inline Time rt(const json& j) { return Time{j.get<std::int64_t>()}; }

inline json fault_json(const FaultReport& f) {
    return {{"contract", f.contract}, {"observed_ed", f.observed_ed.ns()}, {"ped", f.ped.ns()},
            {"detected_at", f.detected_at.ns()}, {"cause", static_cast<int>(f.cause)}};
}
inline FaultReport read_fault(const json& j) {
    return {j.at("contract").get<ContractId>(), rt(j.at("observed_ed")), rt(j.at("ped")), rt(j.at("detected_at")),
            static_cast<FaultCause>(j.at("cause").get<int>())};
}

}  // namespace detail

inline void write_run_log(std::ostream& os, const RunLog& log) {
    using detail::json;
    auto line = [&](const json& j) { os << j.dump() << '\n'; };

    line({{"type", "meta"}, {"variant", log.variant}, {"seed", log.seed},
          {"emulation_time", log.emulation_time.ns()},
          {"estimation_interval", log.estimation_interval.ns()}, {"access_delay", log.access_delay.ns()}});
    for (const auto& f : log.flows) {
        line({{"type", "flow"}, {"id", f.id}, {"name", f.name},
              {"contract", f.contract ? json(*f.contract) : json(nullptr)}, {"volume", f.total_volume.value}});
    }
    for (const auto& p : log.paths) line({{"type", "path"}, {"switches", p}});
    for (const auto& p : log.packets) {
        line({{"type", "pkt"}, {"f", p.flow}, {"len", p.length.value}, {"sent", p.sent_at.ns()},
              {"dlv", p.delivered_at.ns()}, {"delay", p.actual_delay.ns()}, {"fate", static_cast<int>(p.fate)},
              {"path", p.path}});
    }
    for (const auto& c : log.costs) {
        line({{"type", "cost"}, {"cycle", c.cycle}, {"at", c.at.ns()}, {"from", c.from}, {"to", c.to},
              {"ld", c.link_delay.ns()}, {"td", c.transmission_delay.ns()}, {"lc", c.cost.ns()}});
    }
    for (const auto& n : log.noise) line({{"type", "noise"}, {"at", n.at.ns()}, {"s1", n.s1}, {"s2", n.s2}});
    for (const auto& r : log.routes) {
        json hops = json::array();
        for (auto h : r.hop_costs) hops.push_back(h.ns());
        line({{"type", "route"}, {"at", r.at.ns()}, {"src", r.src}, {"dst", r.dst}, {"path", r.path},
              {"ed", r.ed.ns()}, {"hops", hops}, {"version", r.matrix_version}, {"reason", r.reason}});
    }
    for (const auto& n : log.notifications) {
        line({{"type", "event"}, {"kind", n.kind == EventKind::E1 ? "E1" : "E2"}, {"link", n.link},
              {"contract", n.contract}, {"occurred", n.occurred_at.ns()}, {"delivered", n.delivered_at.ns()}});
    }
    for (const auto& f : log.faults) {
        auto j = detail::fault_json(f);
        j["type"] = "fault";
        line(j);
    }
    for (const auto& d : log.decisions) {
        line({{"type", "decision"}, {"at", d.at.ns()}, {"contract", d.contract},
              {"outcome", static_cast<int>(d.outcome)}, {"best_ed", detail::opt_time(d.best_ed)}});
    }
    for (const auto& r : log.restorations) {
        line({{"type", "restoration"}, {"fault", detail::fault_json(r.fault)}, {"detection", r.detection_delay.ns()},
              {"recalculation", r.recalculation_delay.ns()}, {"reassignment", r.reassignment_delay.ns()},
              {"total", r.total.ns()}, {"outcome", static_cast<int>(r.outcome)}});
    }
    for (const auto& w : log.warnings) {
        line({{"type", "warning"}, {"contract", w.contract}, {"best_ed", detail::opt_time(w.best_ed)},
              {"at", w.at.ns()}});
    }
    for (const auto& c : log.contract_history) {
        line({{"type", "contract"}, {"at", c.at.ns()}, {"pair", c.pair}, {"active", static_cast<int>(c.active)},
              {"strong", c.strong_ped.ns()}, {"weak", c.weak_ped.ns()}});
    }
    for (const auto& a : log.annotations) {
        line({{"type", "annotation"}, {"at", a.at.ns()}, {"pair", a.pair}, {"tag", a.tag}});
    }
}

inline RunLog read_run_log(std::istream& is) {
    using detail::json;
    using detail::rt;
    RunLog log;
    std::string text;
    while (std::getline(is, text)) {
        if (text.empty()) continue;
        const json j = json::parse(text);
        const std::string type = j.at("type").get<std::string>();
        if (type == "meta") {
            log.variant = j.at("variant").get<std::string>();
            log.seed = j.at("seed").get<std::uint64_t>();
            log.emulation_time = rt(j.at("emulation_time"));
            log.estimation_interval = rt(j.at("estimation_interval"));
            log.access_delay = rt(j.at("access_delay"));
        } else if (type == "flow") {
            FlowInfo f{j.at("id").get<FlowId>(), j.at("name").get<std::string>(), std::nullopt,
                       Bits{j.at("volume").get<std::int64_t>()}};
            if (!j.at("contract").is_null()) f.contract = j.at("contract").get<PairId>();
            log.flows.push_back(std::move(f));
        } else if (type == "path") {
            log.intern(j.at("switches").get<Path>());
        } else if (type == "pkt") {
            log.packets.push_back({j.at("f").get<FlowId>(), Bits{j.at("len").get<std::int64_t>()}, rt(j.at("sent")),
                                   rt(j.at("dlv")), rt(j.at("delay")), static_cast<PacketFate>(j.at("fate").get<int>()),
                                   j.at("path").get<PathIndex>()});
        } else if (type == "cost") {
            log.costs.push_back({j.at("cycle").get<std::uint64_t>(), rt(j.at("at")), j.at("from").get<SwitchId>(),
                                 j.at("to").get<SwitchId>(), rt(j.at("ld")), rt(j.at("td")), rt(j.at("lc"))});
        } else if (type == "noise") {
            log.noise.push_back({rt(j.at("at")), j.at("s1").get<SwitchId>(), j.at("s2").get<SwitchId>()});
        } else if (type == "route") {
            RouteRecord r{rt(j.at("at")), j.at("src").get<SwitchId>(), j.at("dst").get<SwitchId>(),
                          j.at("path").get<PathIndex>(), rt(j.at("ed")), {}, j.at("version").get<std::uint64_t>(),
                          j.at("reason").get<std::string>()};
            for (const auto& h : j.at("hops")) r.hop_costs.push_back(rt(h));
            log.routes.push_back(std::move(r));
        } else if (type == "event") {
            log.notifications.push_back({j.at("kind").get<std::string>() == "E1" ? EventKind::E1 : EventKind::E2,
                                         j.at("link").get<LinkId>(), j.at("contract").get<ContractId>(),
                                         rt(j.at("occurred")), rt(j.at("delivered"))});
        } else if (type == "fault") {
            log.faults.push_back(detail::read_fault(j));
        } else if (type == "decision") {
            log.decisions.push_back({rt(j.at("at")), j.at("contract").get<ContractId>(),
                                     static_cast<Outcome>(j.at("outcome").get<int>()),
                                     detail::read_opt_time(j.at("best_ed"))});
        } else if (type == "restoration") {
            log.restorations.push_back({detail::read_fault(j.at("fault")), rt(j.at("detection")),
                                        rt(j.at("recalculation")), rt(j.at("reassignment")), rt(j.at("total")),
                                        static_cast<Outcome>(j.at("outcome").get<int>())});
        } else if (type == "warning") {
            log.warnings.push_back(
                {j.at("contract").get<ContractId>(), detail::read_opt_time(j.at("best_ed")), rt(j.at("at"))});
        } else if (type == "contract") {
            log.contract_history.push_back({rt(j.at("at")), j.at("pair").get<PairId>(),
                                            static_cast<ContractKind>(j.at("active").get<int>()), rt(j.at("strong")),
                                            rt(j.at("weak"))});
        } else if (type == "annotation") {
            log.annotations.push_back({rt(j.at("at")), j.at("pair").get<PairId>(), j.at("tag").get<std::string>()});
        } else {
            throw std::runtime_error("run log: unknown record type '" + type + "'");
        }
    }
    return log;
}

}  // namespace sdnrm
