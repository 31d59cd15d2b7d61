#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdnrm/error.hpp"
#include "sdnrm/topology.hpp"
#include "sdnrm/units.hpp"

namespace sdnrm {

enum class ContractKind { Strong, Weak };

inline const char* to_string(ContractKind k) { return k == ContractKind::Strong ? "strong" : "weak"; }

// Contract ids encode the pair: 2*pair for strong, 2*pair+1 for weak.
using ContractId = std::uint32_t;
using PairId = std::uint32_t;

inline constexpr ContractId contract_id(PairId pair, ContractKind kind) {
    return 2 * pair + (kind == ContractKind::Weak ? 1 : 0);
}
inline constexpr PairId pair_of(ContractId c) { return c / 2; }
inline constexpr ContractKind kind_of(ContractId c) { return c % 2 ? ContractKind::Weak : ContractKind::Strong; }

struct Contract {
    ContractId id = 0;
    SwitchId src = 0;
    SwitchId dst = 0;
    ContractKind kind = ContractKind::Strong;
    Time ped{};  // end-to-end delay requirement
    std::vector<std::string> assumptions;
    bool active = false;
};

struct ContractPair {
    std::string name;
    Contract strong;
    Contract weak;

    const Contract& active() const { return strong.active ? strong : weak; }
    ContractKind active_kind() const { return strong.active ? ContractKind::Strong : ContractKind::Weak; }
    Contract& get(ContractKind k) { return k == ContractKind::Strong ? strong : weak; }
    const Contract& get(ContractKind k) const { return k == ContractKind::Strong ? strong : weak; }
};

inline const std::vector<std::string>& default_assumptions() {
    static const std::vector<std::string> tags{"stable_path_between_intervals",
                                               "no_events_between_intervals"};
    return tags;
}

// Strong is active on creation. Requires weak_ped >= strong_ped > 0.
inline ContractPair create_contract_pair(SwitchId src, SwitchId dst, Time strong_ped, Time weak_ped,
                                         PairId pair = 0, std::string name = {}) {
    if (strong_ped <= Time::zero()) throw ModelError("contract: strong ped must be positive");
    if (weak_ped < strong_ped) throw ModelError("contract: weak ped below strong ped");
    ContractPair p;
    p.name = std::move(name);
    p.strong = Contract{contract_id(pair, ContractKind::Strong), src, dst, ContractKind::Strong, strong_ped,
                        default_assumptions(), true};
    p.weak = Contract{contract_id(pair, ContractKind::Weak), src, dst, ContractKind::Weak, weak_ped,
                      default_assumptions(), false};
    return p;
}

enum class FaultCause { EstimationCycle, LinkFailureEvent, ContractChangeEvent };

inline const char* to_string(FaultCause c) {
    switch (c) {
        case FaultCause::EstimationCycle: return "cycle";
        case FaultCause::LinkFailureEvent: return "E1";
        case FaultCause::ContractChangeEvent: return "E2";
    }
    return "?";
}

struct FaultReport {
    ContractId contract = 0;
    Time observed_ed{};  // Time::max() when the installed path is broken
    Time ped{};
    Time detected_at{};
    FaultCause cause = FaultCause::EstimationCycle;
};

// Stateless check of the guarantee ed <= ped. A missing ed (path crosses a
// link without a cost entry) is a violation.
inline std::optional<FaultReport> observe(const Contract& c, std::optional<Time> ed, Time now, FaultCause cause) {
    const Time value = ed.value_or(Time::max());
    if (value <= c.ped) return std::nullopt;
    return FaultReport{c.id, value, c.ped, now, cause};
}

struct ContractChangeEvent {
    ContractId contract = 0;
    Time old_ped{};
    Time new_ped{};
    Time at{};
};

class ContractStore {
public:
    PairId add(ContractPair p) {
        const auto id = static_cast<PairId>(pairs_.size());
        p.strong.id = contract_id(id, ContractKind::Strong);
        p.weak.id = contract_id(id, ContractKind::Weak);
        pairs_.push_back(std::move(p));
        return id;
    }

    std::size_t size() const { return pairs_.size(); }
    const ContractPair& pair(PairId p) const { return pairs_.at(p); }
    const std::vector<ContractPair>& pairs() const { return pairs_; }
    const Contract& contract(ContractId c) const { return pairs_.at(pair_of(c)).get(kind_of(c)); }

    std::optional<PairId> find(SwitchId src, SwitchId dst) const {
        for (PairId i = 0; i < pairs_.size(); ++i) {
            if (pairs_[i].strong.src == src && pairs_[i].strong.dst == dst) return i;
        }
        return std::nullopt;
    }

    // Replaces the ped. Keeps weak >= strong by scaling the sibling with the
    // same ratio as the edited contract. Unchanged ped -> no event.
    std::optional<ContractChangeEvent> modify_contract(ContractId c, Time new_ped, Time now) {
        if (pair_of(c) >= pairs_.size()) throw ModelError("modify_contract: unknown contract");
        if (new_ped <= Time::zero()) throw ModelError("modify_contract: ped must be positive");
        ContractPair& p = pairs_[pair_of(c)];
        Contract& target = p.get(kind_of(c));
        const Time old = target.ped;
        if (new_ped == old) return std::nullopt;
        target.ped = new_ped;

        auto scaled = [&](Time v) {
            const __int128 num = static_cast<__int128>(v.ns()) * new_ped.ns();
            return Time{static_cast<std::int64_t>((2 * num + old.ns()) / (2 * old.ns()))};
        };
        if (p.weak.ped < p.strong.ped) {
            if (target.kind == ContractKind::Strong) {
                p.weak.ped = std::max(scaled(p.weak.ped), p.strong.ped);
            } else {
                p.strong.ped = std::clamp(scaled(p.strong.ped), Time{1}, p.weak.ped);
            }
        }
        return ContractChangeEvent{c, old, new_ped, now};
    }

    // Returns false if `to` was already active.
    bool switch_active(PairId pair, ContractKind to) {
        ContractPair& p = pairs_.at(pair);
        if (p.active_kind() == to) return false;
        p.strong.active = (to == ContractKind::Strong);
        p.weak.active = !p.strong.active;
        return true;
    }

private:
    std::vector<ContractPair> pairs_;
};

}  // namespace sdnrm
