#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sdnrm/contracts.hpp"
#include "sdnrm/error.hpp"
#include "sdnrm/flow.hpp"
#include "sdnrm/kernel.hpp"
#include "sdnrm/topology.hpp"
#include "sdnrm/units.hpp"
#include "sdnrm/variant.hpp"

namespace sdnrm {

// ---- scenario data ---------------------------------------------------------

struct SwitchDecl {
    std::string name;
    std::optional<Time> control_down;
    std::optional<Time> control_up;
    int line = 0;
};

struct FlowGroup {
    std::string name;
    int count = 1;  // > 1 expands to name1..nameN
    std::string src;
    std::string dst;
    Bits volume{};
    Bits packet = bytes(1500);
    Time start{};
    Time spacing{};  // start offset between consecutive members
    Time gap{};      // inter-packet gap
    int line = 0;
};

struct ContractDecl {
    std::string name;
    std::string src;  // switch or host name
    std::string dst;
    Time strong{};
    std::optional<Time> weak;  // default: twice the strong requirement
    std::vector<std::string> assumptions;
    int line = 0;
};

struct LinkToggle {
    Time at{};
    std::string a;
    std::string b;
    LinkState state = LinkState::Down;
    int line = 0;
};

struct ContractEdit {
    Time at{};
    std::string contract;
    ContractKind kind = ContractKind::Strong;
    Time ped{};
    int line = 0;
};

// `count` link failures on distinct links from `pool`. The window is split
// into `slots` equal slots and failure i lands in slot i, so with a fixed
// slot count the first k failures do not depend on `count`.
struct RandomLinkFailures {
    int count = 1;
    int slots = 0;  // 0: same as count
    std::vector<std::pair<std::string, std::string>> pool;
    Time window_begin{};
    Time window_end{};
    Time down_for{};
    int line = 0;
};

// `count` successive tightenings of a contract's strong requirement by
// `factor`, placed the same way as RandomLinkFailures.
struct RandomContractEdits {
    int count = 1;
    int slots = 0;
    std::string contract;
    double factor = 0.9;
    Time window_begin{};
    Time window_end{};
    int line = 0;
};

struct Scenario {
    std::string name;
    std::vector<SwitchDecl> switches;
    std::vector<HostSpec> hosts;
    std::vector<LinkSpec> links;
    std::vector<FlowGroup> flows;
    std::vector<ContractDecl> contracts;
    std::vector<LinkToggle> toggles;
    std::vector<ContractEdit> edits;
    std::vector<RandomLinkFailures> random_failures;
    std::vector<RandomContractEdits> random_edits;

    Time emulation_time = seconds(150);
    Time estimation_interval = seconds(10);
    Time control_latency = microseconds(250);
    Time access_delay = Time::zero();
    Time recalculation = microseconds(100);
    std::optional<Time> e1_detection_latency;
    Bits probe_packet = bytes(1500);
    std::size_t queue_limit = 0;
    MechanismVariant variant = kRM;
    std::uint64_t seed = 1;
    LinkDelayMode link_delay_mode = LinkDelayMode::OneWay;
    bool rs3_best_effort = false;

    // Source text, hashed into run manifests.
    std::string text;
};

// ---- value parsing ---------------------------------------------------------

namespace detail {

// Parses "<decimal><unit>" exactly: the decimal times the unit factor must
// be an integer.
inline std::optional<std::int64_t> parse_scaled(std::string_view text,
                                                const std::vector<std::pair<std::string_view, std::int64_t>>& units) {
    std::size_t i = 0;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
    const std::string_view number = text.substr(0, i);
    const std::string_view unit = text.substr(i);
    if (number.empty() || std::count(number.begin(), number.end(), '.') > 1) return std::nullopt;

    std::int64_t factor = 0;
    for (const auto& [name, f] : units) {
        if (unit == name) factor = f;
    }
    if (factor == 0) return std::nullopt;

    const auto dot = number.find('.');
    const std::string_view whole = number.substr(0, dot);
    const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : number.substr(dot + 1);
    __int128 mantissa = 0;
    __int128 scale = 1;
    for (char c : whole) mantissa = mantissa * 10 + (c - '0');
    for (char c : frac) {
        mantissa = mantissa * 10 + (c - '0');
        scale *= 10;
    }
    const __int128 value = mantissa * factor;
    if (value % scale != 0) return std::nullopt;
    const __int128 out = value / scale;
    if (out > std::numeric_limits<std::int64_t>::max()) return std::nullopt;
    return static_cast<std::int64_t>(out);
}

inline Time parse_time(std::string_view text, int line) {
    static const std::vector<std::pair<std::string_view, std::int64_t>> units{
        {"ns", 1}, {"us", 1'000}, {"ms", 1'000'000}, {"s", 1'000'000'000}};
    if (auto v = parse_scaled(text, units)) return Time{*v};
    throw ScenarioError(line, "bad time '" + std::string(text) + "' (expected e.g. 10s, 0.25ms, 120us)");
}

inline Bits parse_bits(std::string_view text, int line) {
    static const std::vector<std::pair<std::string_view, std::int64_t>> units{
        {"b", 1},        {"Kb", 1'000},      {"Mb", 1'000'000},      {"Gb", 1'000'000'000},
        {"B", 8},        {"KB", 8'000},      {"MB", 8'000'000},      {"GB", 8'000'000'000}};
    if (auto v = parse_scaled(text, units)) return Bits{*v};
    throw ScenarioError(line, "bad size '" + std::string(text) + "' (expected e.g. 1500B, 100Mb)");
}

inline Bandwidth parse_bandwidth(std::string_view text, int line) {
    static const std::vector<std::pair<std::string_view, std::int64_t>> units{
        {"bps", 1}, {"Kbps", 1'000}, {"Mbps", 1'000'000}, {"Gbps", 1'000'000'000}};
    if (auto v = parse_scaled(text, units)) return Bandwidth{*v};
    throw ScenarioError(line, "bad bandwidth '" + std::string(text) + "' (expected e.g. 1Gbps)");
}

inline std::int64_t parse_int(std::string_view text, int line) {
    std::int64_t v = 0;
    if (text.empty()) throw ScenarioError(line, "expected an integer");
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ScenarioError(line, "bad integer '" + std::string(text) + "'");
        }
        v = v * 10 + (c - '0');
    }
    return v;
}

inline double parse_double(std::string_view text, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(text), &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw ScenarioError(line, "bad number '" + std::string(text) + "'");
}

inline bool parse_bool(std::string_view text, int line) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ScenarioError(line, "bad boolean '" + std::string(text) + "'");
}

inline std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::pair<std::string, std::string> parse_link_ref(std::string_view text, int line) {
    const auto parts = split(text, '-');
    if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
        throw ScenarioError(line, "bad link reference '" + std::string(text) + "' (expected A-B)");
    }
    return {parts[0], parts[1]};
}

inline std::pair<Time, Time> parse_window(std::string_view text, int line) {
    const auto pos = text.find("..");
    if (pos == std::string_view::npos) throw ScenarioError(line, "bad window (expected a..b)");
    return {parse_time(text.substr(0, pos), line), parse_time(text.substr(pos + 2), line)};
}

// One logical line: a keyword, positional words and key=value options.
struct Line {
    int number = 0;
    std::string keyword;
    std::vector<std::string> words;
    std::map<std::string, std::string> options;
    mutable std::vector<std::string> used;

    bool has(const std::string& key) const { return options.count(key) > 0; }

    const std::string& get(const std::string& key) const {
        auto it = options.find(key);
        if (it == options.end()) throw ScenarioError(number, keyword + ": missing '" + key + "='");
        used.push_back(key);
        return it->second;
    }

    std::optional<std::string> maybe(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return get(key);
    }

    void finish() const {
        for (const auto& [k, v] : options) {
            if (std::find(used.begin(), used.end(), k) == used.end()) {
                throw ScenarioError(number, keyword + ": unknown field '" + k + "'");
            }
        }
    }
};

inline Line tokenize(const std::string& raw, int number) {
    Line line;
    line.number = number;
    std::istringstream in(raw);
    std::string tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (line.keyword.empty() && eq == std::string::npos) {
            line.keyword = tok;
        } else if (eq == std::string::npos) {
            line.words.push_back(tok);
        } else {
            const std::string key = tok.substr(0, eq);
            if (key.empty()) throw ScenarioError(number, "empty field name in '" + tok + "'");
            if (!line.options.emplace(key, tok.substr(eq + 1)).second) {
                throw ScenarioError(number, "field '" + key + "' given twice");
            }
        }
    }
    return line;
}

}  // namespace detail

// ---- loading ---------------------------------------------------------------

inline void validate_scenario(const Scenario& sc);

inline Scenario parse_scenario(const std::string& text, std::string name = {}) {
    using namespace detail;
    Scenario sc;
    sc.name = std::move(name);
    sc.text = text;

    std::string section;
    bool saw_topology = false;
    std::optional<Bandwidth> default_capacity;
    std::optional<Time> default_delay;

    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = raw.find_last_not_of(" \t\r");
        const std::string trimmed = raw.substr(first, last - first + 1);

        if (trimmed.front() == '[') {
            if (trimmed.back() != ']') throw ScenarioError(number, "unterminated section header");
            section = trimmed.substr(1, trimmed.size() - 2);
            if (section != "topology" && section != "flows" && section != "contracts" && section != "injections" &&
                section != "run") {
                throw ScenarioError(number, "unknown section [" + section + "]");
            }
            if (section == "topology") saw_topology = true;
            continue;
        }
        if (section.empty()) throw ScenarioError(number, "content before the first section header");

        const Line line = tokenize(trimmed, number);
        const std::string& kw = line.keyword;

        if (section == "topology") {
            if (kw == "switch") {
                if (line.words.empty()) throw ScenarioError(number, "switch: expected at least one name");
                std::optional<Time> down, up;
                if (auto v = line.maybe("ctrl")) down = up = parse_time(*v, number);
                if (auto v = line.maybe("c2s")) down = parse_time(*v, number);
                if (auto v = line.maybe("s2c")) up = parse_time(*v, number);
                for (const auto& w : line.words) sc.switches.push_back({w, down, up, number});
            } else if (kw == "host") {
                if (line.words.size() != 1) throw ScenarioError(number, "host: expected one name");
                sc.hosts.push_back({line.words[0], line.get("at")});
            } else if (kw == "link") {
                if (line.words.size() != 2) throw ScenarioError(number, "link: expected two switch names");
                if (line.words[0] == line.words[1]) throw ScenarioError(number, "link: endpoints must differ");
                LinkSpec l{line.words[0], line.words[1], {}, {}};
                if (auto v = line.maybe("capacity")) {
                    l.capacity = parse_bandwidth(*v, number);
                } else if (default_capacity) {
                    l.capacity = *default_capacity;
                } else {
                    throw ScenarioError(number, "link: missing 'capacity='");
                }
                if (auto v = line.maybe("delay")) {
                    l.propagation_delay = parse_time(*v, number);
                } else if (default_delay) {
                    l.propagation_delay = *default_delay;
                } else {
                    throw ScenarioError(number, "link: missing 'delay='");
                }
                sc.links.push_back(l);
            } else if (kw == "link_defaults") {
                if (auto v = line.maybe("capacity")) default_capacity = parse_bandwidth(*v, number);
                if (auto v = line.maybe("delay")) default_delay = parse_time(*v, number);
            } else {
                throw ScenarioError(number, "unknown topology entry '" + kw + "'");
            }
        } else if (section == "flows") {
            if (kw != "flow" && kw != "group") throw ScenarioError(number, "unknown flows entry '" + kw + "'");
            if (line.words.size() != 1) throw ScenarioError(number, kw + ": expected one name");
            FlowGroup g;
            g.name = line.words[0];
            g.line = number;
            g.src = line.get("src");
            g.dst = line.get("dst");
            g.volume = parse_bits(line.get("volume"), number);
            if (auto v = line.maybe("packet")) g.packet = parse_bits(*v, number);
            if (auto v = line.maybe("start")) g.start = parse_time(*v, number);
            if (auto v = line.maybe("gap")) {
                g.gap = parse_time(*v, number);
            } else if (auto r = line.maybe("rate")) {
                g.gap = transmission_delay(g.packet, parse_bandwidth(*r, number));
            } else {
                throw ScenarioError(number, kw + ": missing 'gap=' or 'rate='");
            }
            if (kw == "group") {
                g.count = static_cast<int>(parse_int(line.get("count"), number));
                if (auto v = line.maybe("spacing")) g.spacing = parse_time(*v, number);
            }
            sc.flows.push_back(g);
        } else if (section == "contracts") {
            if (kw != "contract") throw ScenarioError(number, "unknown contracts entry '" + kw + "'");
            if (line.words.size() != 1) throw ScenarioError(number, "contract: expected one name");
            ContractDecl c;
            c.name = line.words[0];
            c.line = number;
            c.src = line.get("src");
            c.dst = line.get("dst");
            c.strong = parse_time(line.get("strong"), number);
            if (auto v = line.maybe("weak")) c.weak = parse_time(*v, number);
            if (auto v = line.maybe("assumptions")) {
                c.assumptions = split(*v, ',');
            } else {
                c.assumptions = default_assumptions();
            }
            sc.contracts.push_back(c);
        } else if (section == "injections") {
            if (kw == "link_down" || kw == "link_up") {
                auto [a, b] = parse_link_ref(line.get("link"), number);
                sc.toggles.push_back({parse_time(line.get("at"), number), a, b,
                                      kw == "link_down" ? LinkState::Down : LinkState::Up, number});
            } else if (kw == "e2") {
                ContractEdit e;
                e.line = number;
                e.at = parse_time(line.get("at"), number);
                e.contract = line.get("contract");
                if (auto dot = e.contract.find('.'); dot != std::string::npos) {
                    const std::string kind = e.contract.substr(dot + 1);
                    if (kind != "strong" && kind != "weak") throw ScenarioError(number, "e2: bad contract kind");
                    e.kind = kind == "weak" ? ContractKind::Weak : ContractKind::Strong;
                    e.contract.erase(dot);
                }
                e.ped = parse_time(line.get("ped"), number);
                sc.edits.push_back(e);
            } else if (kw == "e1_random") {
                RandomLinkFailures r;
                r.line = number;
                r.count = static_cast<int>(parse_int(line.get("count"), number));
                if (auto v = line.maybe("slots")) r.slots = static_cast<int>(parse_int(*v, number));
                for (const auto& ref : split(line.get("pool"), ',')) r.pool.push_back(parse_link_ref(ref, number));
                std::tie(r.window_begin, r.window_end) = parse_window(line.get("window"), number);
                r.down_for = parse_time(line.get("down_for"), number);
                sc.random_failures.push_back(r);
            } else if (kw == "e2_random") {
                RandomContractEdits r;
                r.line = number;
                r.count = static_cast<int>(parse_int(line.get("count"), number));
                if (auto v = line.maybe("slots")) r.slots = static_cast<int>(parse_int(*v, number));
                r.contract = line.get("contract");
                std::tie(r.window_begin, r.window_end) = parse_window(line.get("window"), number);
                if (auto v = line.maybe("factor")) r.factor = parse_double(*v, number);
                sc.random_edits.push_back(r);
            } else {
                throw ScenarioError(number, "unknown injection '" + kw + "'");
            }
        } else {  // run
            if (!kw.empty()) throw ScenarioError(number, "run: expected key=value fields, got '" + kw + "'");
            for (const auto& [key, value] : line.options) {
                line.used.push_back(key);
                if (key == "emulation_time") sc.emulation_time = parse_time(value, number);
                else if (key == "estimation_interval") {
                    sc.estimation_interval = parse_time(value, number);
                    if (sc.estimation_interval <= Time::zero()) {
                        throw ScenarioError(number, "estimation_interval must be positive");
                    }
                }
                else if (key == "control_latency") sc.control_latency = parse_time(value, number);
                else if (key == "access_delay") sc.access_delay = parse_time(value, number);
                else if (key == "recalculation") sc.recalculation = parse_time(value, number);
                else if (key == "e1_detection") sc.e1_detection_latency = parse_time(value, number);
                else if (key == "probe_packet") sc.probe_packet = parse_bits(value, number);
                else if (key == "queue_limit") sc.queue_limit = static_cast<std::size_t>(parse_int(value, number));
                else if (key == "seed") sc.seed = static_cast<std::uint64_t>(parse_int(value, number));
                else if (key == "rs3_best_effort") sc.rs3_best_effort = parse_bool(value, number);
                else if (key == "link_delay_mode") {
                    if (value != "one_way" && value != "raw") throw ScenarioError(number, "link_delay_mode: one_way or raw");
                    sc.link_delay_mode = value == "raw" ? LinkDelayMode::Raw : LinkDelayMode::OneWay;
                } else if (key == "variant") {
                    try {
                        sc.variant = parse_variant(value);
                    } catch (const ModelError& e) {
                        throw ScenarioError(number, e.what());
                    }
                } else {
                    throw ScenarioError(number, "run: unknown field '" + key + "'");
                }
            }
        }
        line.finish();
    }

    if (!saw_topology) throw ScenarioError(0, "missing [topology] section");
    validate_scenario(sc);
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(0, "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string name = path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos) name.erase(0, slash + 1);
    if (auto dot = name.rfind('.'); dot != std::string::npos) name.erase(dot);
    return parse_scenario(buf.str(), name);
}

// ---- validation and instantiation ----------------------------------------

namespace detail {

inline TopologySpec topology_spec(const Scenario& sc) {
    TopologySpec spec;
    for (const auto& s : sc.switches) {
        spec.switches.push_back({s.name, s.control_down.value_or(sc.control_latency),
                                 s.control_up.value_or(sc.control_latency)});
    }
    spec.hosts = sc.hosts;
    spec.links = sc.links;
    return spec;
}

inline std::optional<SwitchId> endpoint(const Topology& topo, const std::string& name) {
    if (auto s = topo.find_switch(name)) return s;
    if (auto h = topo.find_host(name)) return topo.host_at(*h).attached_to;
    return std::nullopt;
}

inline std::optional<PairId> contract_index(const Scenario& sc, const std::string& name) {
    for (PairId i = 0; i < sc.contracts.size(); ++i) {
        if (sc.contracts[i].name == name) return i;
    }
    return std::nullopt;
}

}  // namespace detail

inline void validate_scenario(const Scenario& sc) {
    if (sc.estimation_interval <= Time::zero()) throw ScenarioError(0, "estimation_interval must be positive");
    if (sc.emulation_time < sc.estimation_interval) {
        throw ScenarioError(0, "emulation_time must be at least estimation_interval");
    }
    if (sc.switches.empty()) throw ScenarioError(0, "topology has no switches");

    Topology topo;
    try {
        topo = build_topology(detail::topology_spec(sc));
    } catch (const ModelError& e) {
        throw ScenarioError(0, std::string("topology: ") + e.what());
    }

    for (const auto& g : sc.flows) {
        if (!topo.find_host(g.src)) throw ScenarioError(g.line, "unknown host '" + g.src + "'");
        if (!topo.find_host(g.dst)) throw ScenarioError(g.line, "unknown host '" + g.dst + "'");
        if (g.count < 1) throw ScenarioError(g.line, "group count must be at least 1");
        if (g.packet.value <= 0 || g.volume < g.packet) {
            throw ScenarioError(g.line, "volume must be at least one positive-size packet");
        }
    }
    std::vector<std::pair<SwitchId, SwitchId>> pairs;
    for (const auto& c : sc.contracts) {
        auto s = detail::endpoint(topo, c.src);
        auto d = detail::endpoint(topo, c.dst);
        if (!s) throw ScenarioError(c.line, "unknown endpoint '" + c.src + "'");
        if (!d) throw ScenarioError(c.line, "unknown endpoint '" + c.dst + "'");
        if (std::find(pairs.begin(), pairs.end(), std::pair{*s, *d}) != pairs.end()) {
            throw ScenarioError(c.line, "second contract for the same switch pair");
        }
        pairs.emplace_back(*s, *d);
        if (c.strong <= Time::zero()) throw ScenarioError(c.line, "strong requirement must be positive");
        if (c.weak && *c.weak < c.strong) throw ScenarioError(c.line, "weak requirement below strong");
        if (std::count_if(sc.contracts.begin(), sc.contracts.end(), [&](auto& o) { return o.name == c.name; }) > 1) {
            throw ScenarioError(c.line, "duplicate contract '" + c.name + "'");
        }
    }

    auto check_link = [&](const std::string& a, const std::string& b, int line) {
        auto sa = topo.find_switch(a);
        auto sb = topo.find_switch(b);
        if (!sa || !sb || !topo.find_link(*sa, *sb)) throw ScenarioError(line, "unknown link " + a + "-" + b);
    };
    auto check_time = [&](Time t, int line) {
        if (t < Time::zero() || t > sc.emulation_time) throw ScenarioError(line, "injection outside emulation time");
    };
    for (const auto& t : sc.toggles) {
        check_link(t.a, t.b, t.line);
        check_time(t.at, t.line);
    }
    for (const auto& e : sc.edits) {
        if (!detail::contract_index(sc, e.contract)) throw ScenarioError(e.line, "unknown contract '" + e.contract + "'");
        if (e.ped <= Time::zero()) throw ScenarioError(e.line, "ped must be positive");
        check_time(e.at, e.line);
    }
    for (const auto& r : sc.random_failures) {
        for (const auto& [a, b] : r.pool) check_link(a, b, r.line);
        const int slots = r.slots ? r.slots : r.count;
        if (r.count < 0 || r.count > slots) throw ScenarioError(r.line, "e1_random: count exceeds slots");
        if (static_cast<std::size_t>(r.count) > r.pool.size()) {
            throw ScenarioError(r.line, "e1_random: more failures than distinct links in the pool");
        }
        check_time(r.window_begin, r.line);
        check_time(r.window_end, r.line);
        if (r.window_end <= r.window_begin) throw ScenarioError(r.line, "e1_random: empty window");
        if (slots > 0 && Time{(r.window_end - r.window_begin).ns() / slots} < r.down_for) {
            throw ScenarioError(r.line, "e1_random: down_for longer than a slot");
        }
    }
    for (const auto& r : sc.random_edits) {
        if (!detail::contract_index(sc, r.contract)) throw ScenarioError(r.line, "unknown contract '" + r.contract + "'");
        const int slots = r.slots ? r.slots : r.count;
        if (r.count < 0 || r.count > slots) throw ScenarioError(r.line, "e2_random: count exceeds slots");
        if (!(r.factor > 0.0)) throw ScenarioError(r.line, "e2_random: factor must be positive");
        check_time(r.window_begin, r.line);
        check_time(r.window_end, r.line);
        if (r.window_end <= r.window_begin) throw ScenarioError(r.line, "e2_random: empty window");
    }
}

// Every flow group gets `n` members.
inline Scenario with_flow_count(Scenario sc, int n) {
    for (auto& g : sc.flows) g.count = n;
    validate_scenario(sc);
    return sc;
}

// Every randomly placed event group gets `n` events.
inline Scenario with_event_count(Scenario sc, int n) {
    for (auto& r : sc.random_failures) {
        if (!r.slots) r.slots = r.count;
        r.count = n;
    }
    for (auto& r : sc.random_edits) {
        if (!r.slots) r.slots = r.count;
        r.count = n;
    }
    validate_scenario(sc);
    return sc;
}

// Uniform integer in [lo, hi] by rejection, so results do not depend on the
// standard library's distribution implementation.
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

struct Injection {
    enum class Kind { LinkDown, LinkUp, ContractChange };
    Time at{};
    Kind kind = Kind::LinkDown;
    SwitchId a = 0;
    SwitchId b = 0;
    ContractId contract = 0;
    Time ped{};
};

// Concrete run inputs for one (scenario, variant, seed).
struct Instance {
    Topology topology;
    std::vector<Flow> flows;
    ContractStore contracts;
    std::vector<Injection> injections;
    KernelConfig config;
};

inline Instance instantiate(const Scenario& sc, const MechanismVariant& variant, std::uint64_t seed) {
    Instance inst;
    inst.topology = build_topology(detail::topology_spec(sc));
    const Topology& topo = inst.topology;

    for (const auto& g : sc.flows) {
        for (int i = 0; i < g.count; ++i) {
            Flow f;
            f.name = g.count == 1 ? g.name : g.name + std::to_string(i + 1);
            f.src_host = topo.host_id(g.src);
            f.dst_host = topo.host_id(g.dst);
            f.packet_length = g.packet;
            f.total_volume = g.volume;
            f.start_time = g.start + g.spacing * i;
            f.inter_packet_gap = g.gap;
            inst.flows.push_back(f);
        }
    }
    for (const auto& c : sc.contracts) {
        const SwitchId s = *detail::endpoint(topo, c.src);
        const SwitchId d = *detail::endpoint(topo, c.dst);
        const auto id = static_cast<PairId>(inst.contracts.size());
        ContractPair p = create_contract_pair(s, d, c.strong, c.weak.value_or(c.strong * 2), id, c.name);
        p.strong.assumptions = p.weak.assumptions = c.assumptions;
        inst.contracts.add(std::move(p));
    }

    for (const auto& t : sc.toggles) {
        inst.injections.push_back({t.at, t.state == LinkState::Down ? Injection::Kind::LinkDown : Injection::Kind::LinkUp,
                                   topo.switch_id(t.a), topo.switch_id(t.b), 0, {}});
    }
    for (const auto& e : sc.edits) {
        const PairId p = *detail::contract_index(sc, e.contract);
        inst.injections.push_back({e.at, Injection::Kind::ContractChange, 0, 0, contract_id(p, e.kind), e.ped});
    }

    std::mt19937_64 rng(seed);
    for (const auto& r : sc.random_failures) {
        std::vector<std::size_t> order(r.pool.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i) - 1))]);
        }
        const int slots = r.slots ? r.slots : r.count;
        const std::int64_t width = (r.window_end - r.window_begin).ns() / std::max(slots, 1);
        for (int i = 0; i < slots; ++i) {
            const Time at = r.window_begin + Time{width * i + uniform_int(rng, 0, width - r.down_for.ns())};
            if (i >= r.count) continue;
            const auto& [a, b] = r.pool[order[static_cast<std::size_t>(i)]];
            inst.injections.push_back({at, Injection::Kind::LinkDown, topo.switch_id(a), topo.switch_id(b), 0, {}});
            const Time up = at + r.down_for;
            if (up <= sc.emulation_time) {
                inst.injections.push_back({up, Injection::Kind::LinkUp, topo.switch_id(a), topo.switch_id(b), 0, {}});
            }
        }
    }
    for (const auto& r : sc.random_edits) {
        const PairId p = *detail::contract_index(sc, r.contract);
        const Time base = sc.contracts[p].strong;
        const int slots = r.slots ? r.slots : r.count;
        const std::int64_t width = (r.window_end - r.window_begin).ns() / std::max(slots, 1);
        double scale = 1.0;
        for (int i = 0; i < slots; ++i) {
            const Time at = r.window_begin + Time{width * i + uniform_int(rng, 0, width - 1)};
            scale *= r.factor;
            if (i >= r.count) continue;
            const Time ped{std::max<std::int64_t>(1, std::llround(static_cast<double>(base.ns()) * scale))};
            inst.injections.push_back({at, Injection::Kind::ContractChange, 0, 0, contract_id(p, ContractKind::Strong), ped});
        }
    }
    std::stable_sort(inst.injections.begin(), inst.injections.end(),
                     [](const Injection& x, const Injection& y) { return x.at < y.at; });

    KernelConfig& cfg = inst.config;
    cfg.emulation_time = sc.emulation_time;
    cfg.estimation_interval = sc.estimation_interval;
    cfg.llde.probe_packet_length = sc.probe_packet;
    cfg.llde.mode = sc.link_delay_mode;
    cfg.resilience.recalculation = sc.recalculation;
    cfg.resilience.e1_detection_latency = sc.e1_detection_latency;
    cfg.resilience.rs3_best_effort = sc.rs3_best_effort;
    cfg.variant = variant;
    cfg.queue_limit = sc.queue_limit;
    cfg.access_delay = sc.access_delay;
    cfg.seed = seed;
    return inst;
}

inline Kernel make_kernel(const Instance& inst) {
    Kernel k(inst.topology, inst.flows, inst.contracts, inst.config);
    for (const auto& inj : inst.injections) {
        switch (inj.kind) {
            case Injection::Kind::LinkDown: k.inject_link_state(inj.at, inj.a, inj.b, LinkState::Down); break;
            case Injection::Kind::LinkUp: k.inject_link_state(inj.at, inj.a, inj.b, LinkState::Up); break;
            case Injection::Kind::ContractChange: k.inject_contract_change(inj.at, inj.contract, inj.ped); break;
        }
    }
    return k;
}

// One complete run.
inline RunLog run_scenario(const Scenario& sc, const MechanismVariant& variant, std::uint64_t seed) {
    Kernel k = make_kernel(instantiate(sc, variant, seed));
    k.run();
    return k.finish();
}

}  // namespace sdnrm
