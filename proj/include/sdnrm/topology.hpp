#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sdnrm/error.hpp"
#include "sdnrm/units.hpp"

namespace sdnrm {

// Dense indices assigned in declaration order. Ordering of switch ids is
// declaration order; routing tie-breaks rely on it.
using SwitchId = std::uint32_t;
using HostId = std::uint32_t;
using LinkId = std::uint32_t;

enum class LinkState { Up, Down };

struct SwitchSpec {
    std::string name;
    Time control_down = microseconds(250);  // controller -> switch
    Time control_up = microseconds(250);    // switch -> controller
};

struct HostSpec {
    std::string name;
    std::string attached_to;
};

struct LinkSpec {
    std::string a;
    std::string b;
    Bandwidth capacity{};
    Time propagation_delay{};
};

struct TopologySpec {
    std::vector<SwitchSpec> switches;
    std::vector<HostSpec> hosts;
    std::vector<LinkSpec> links;
};

struct Switch {
    std::string name;
    Time control_down;
    Time control_up;
};

struct Host {
    std::string name;
    SwitchId attached_to = 0;
};

struct Link {
    SwitchId a = 0;
    SwitchId b = 0;
    Bandwidth capacity{};
    Time propagation_delay{};
    LinkState state = LinkState::Up;
    // Number of Up->Down transitions so far; in-flight packets remember the
    // value at send time and are dropped if it changed before arrival.
    std::uint64_t down_transitions = 0;

    bool up() const { return state == LinkState::Up; }
    SwitchId other(SwitchId s) const { return s == a ? b : a; }
};

class Topology {
public:
    std::size_t switch_count() const { return switches_.size(); }
    std::size_t host_count() const { return hosts_.size(); }
    std::size_t link_count() const { return links_.size(); }

    const Switch& switch_at(SwitchId s) const { return switches_.at(s); }
    const Host& host_at(HostId h) const { return hosts_.at(h); }
    const Link& link_at(LinkId l) const { return links_.at(l); }
    const std::vector<Link>& links() const { return links_; }

    std::optional<SwitchId> find_switch(const std::string& name) const {
        auto it = switch_index_.find(name);
        if (it == switch_index_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<HostId> find_host(const std::string& name) const {
        auto it = host_index_.find(name);
        if (it == host_index_.end()) return std::nullopt;
        return it->second;
    }

    SwitchId switch_id(const std::string& name) const {
        if (auto s = find_switch(name)) return *s;
        throw ModelError("unknown switch '" + name + "'");
    }

    HostId host_id(const std::string& name) const {
        if (auto h = find_host(name)) return *h;
        throw ModelError("unknown host '" + name + "'");
    }

    std::optional<LinkId> find_link(SwitchId a, SwitchId b) const {
        auto it = link_index_.find(pair_key(a, b));
        if (it == link_index_.end()) return std::nullopt;
        return it->second;
    }

    // Links incident to s, in declaration order.
    const std::vector<LinkId>& incident(SwitchId s) const { return incident_.at(s); }

    // Idempotent. Returns true if the state actually changed.
    bool set_link_state(SwitchId a, SwitchId b, LinkState state) {
        auto id = find_link(a, b);
        if (!id) {
            throw ModelError("set_link_state: no link between '" + name_of(a) + "' and '" +
                             name_of(b) + "'");
        }
        Link& link = links_[*id];
        if (link.state == state) return false;
        link.state = state;
        if (state == LinkState::Down) ++link.down_transitions;
        return true;
    }

    std::string name_of(SwitchId s) const {
        return s < switches_.size() ? switches_[s].name : "#" + std::to_string(s);
    }

    std::string link_name(LinkId l) const {
        const Link& link = links_.at(l);
        return switches_[link.a].name + "-" + switches_[link.b].name;
    }

    friend Topology build_topology(const TopologySpec& spec);

private:
    static std::uint64_t pair_key(SwitchId a, SwitchId b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | b;
    }

    std::vector<Switch> switches_;
    std::vector<Host> hosts_;
    std::vector<Link> links_;
    std::vector<std::vector<LinkId>> incident_;
    std::unordered_map<std::string, SwitchId> switch_index_;
    std::unordered_map<std::string, HostId> host_index_;
    std::unordered_map<std::uint64_t, LinkId> link_index_;
};

// Validates the spec and returns a topology with every link Up. Any
// violation throws ModelError; nothing partial is returned.
inline Topology build_topology(const TopologySpec& spec) {
    Topology topo;
    for (const auto& s : spec.switches) {
        if (s.name.empty()) throw ModelError("switch with empty name");
        if (s.control_down < Time::zero() || s.control_up < Time::zero()) {
            throw ModelError("switch '" + s.name + "': negative control-channel latency");
        }
        if (!topo.switch_index_.emplace(s.name, static_cast<SwitchId>(topo.switches_.size())).second) {
            throw ModelError("duplicate switch id '" + s.name + "'");
        }
        topo.switches_.push_back(Switch{s.name, s.control_down, s.control_up});
    }
    topo.incident_.resize(topo.switches_.size());

    for (const auto& h : spec.hosts) {
        if (h.name.empty()) throw ModelError("host with empty name");
        if (topo.switch_index_.count(h.name)) {
            throw ModelError("duplicate id '" + h.name + "' (already a switch)");
        }
        auto sw = topo.find_switch(h.attached_to);
        if (!sw) {
            throw ModelError("host '" + h.name + "' attaches to unknown switch '" + h.attached_to + "'");
        }
        if (!topo.host_index_.emplace(h.name, static_cast<HostId>(topo.hosts_.size())).second) {
            throw ModelError("duplicate host id '" + h.name + "'");
        }
        topo.hosts_.push_back(Host{h.name, *sw});
    }

    for (const auto& l : spec.links) {
        auto a = topo.find_switch(l.a);
        auto b = topo.find_switch(l.b);
        if (!a) throw ModelError("link endpoint '" + l.a + "' is not a switch");
        if (!b) throw ModelError("link endpoint '" + l.b + "' is not a switch");
        if (*a == *b) throw ModelError("self-loop link on '" + l.a + "'");
        if (l.capacity.bps <= 0) {
            throw ModelError("link " + l.a + "-" + l.b + ": capacity must be positive");
        }
        if (l.propagation_delay < Time::zero()) {
            throw ModelError("link " + l.a + "-" + l.b + ": negative propagation delay");
        }
        const auto id = static_cast<LinkId>(topo.links_.size());
        if (!topo.link_index_.emplace(Topology::pair_key(*a, *b), id).second) {
            throw ModelError("parallel link " + l.a + "-" + l.b + " (unsupported)");
        }
        topo.links_.push_back(Link{*a, *b, l.capacity, l.propagation_delay});
        topo.incident_[*a].push_back(id);
        topo.incident_[*b].push_back(id);
    }
    return topo;
}

}  // namespace sdnrm
