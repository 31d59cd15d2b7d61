#pragma once

#include <array>
#include <string>
#include <string_view>

#include "sdnrm/error.hpp"

namespace sdnrm {

// Which resilience features a controller build has.
struct MechanismVariant {
    std::string_view name;
    bool proactive = false;
    bool reactive = false;
    bool strong_contracts = false;
    bool weak_contracts = false;

    bool has_resilience() const { return proactive || reactive; }
    friend bool operator==(const MechanismVariant&, const MechanismVariant&) = default;
};

inline constexpr MechanismVariant kWoRM{"SDN-woRM", false, false, false, false};
inline constexpr MechanismVariant kSRM{"SDN-sRM", true, true, true, false};
inline constexpr MechanismVariant kPRM{"SDN-pRM", true, false, true, true};
inline constexpr MechanismVariant kRM{"SDN-RM", true, true, true, true};

inline constexpr std::array<MechanismVariant, 4> kAllVariants{kWoRM, kSRM, kPRM, kRM};

// Accepts "SDN-RM" as well as the short "RM"; case-sensitive.
inline MechanismVariant parse_variant(std::string_view text) {
    for (const auto& v : kAllVariants) {
        if (text == v.name || text == v.name.substr(4)) return v;
    }
    throw ModelError("unknown mechanism variant '" + std::string(text) + "'");
}

inline std::string short_name(const MechanismVariant& v) { return std::string(v.name.substr(4)); }

}  // namespace sdnrm
