#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

#include "sdnrm/error.hpp"

namespace sdnrm {

// Simulation time in integer nanoseconds. Timestamps are non-negative;
// intermediate differences may be negative and are kept in raw int64 form.
class Time {
public:
    constexpr Time() = default;
    constexpr explicit Time(std::int64_t ns) : ns_(ns) {}

    static constexpr Time zero() { return Time{0}; }
    static constexpr Time max() { return Time{std::numeric_limits<std::int64_t>::max()}; }

    constexpr std::int64_t ns() const { return ns_; }
    constexpr double seconds() const { return static_cast<double>(ns_) * 1e-9; }
    constexpr double millis() const { return static_cast<double>(ns_) * 1e-6; }

    constexpr Time& operator+=(Time o) { ns_ += o.ns_; return *this; }
    constexpr Time& operator-=(Time o) { ns_ -= o.ns_; return *this; }
    friend constexpr Time operator+(Time a, Time b) { return Time{a.ns_ + b.ns_}; }
    friend constexpr Time operator-(Time a, Time b) { return Time{a.ns_ - b.ns_}; }
    friend constexpr Time operator*(Time a, std::int64_t k) { return Time{a.ns_ * k}; }
    friend constexpr Time operator*(std::int64_t k, Time a) { return Time{a.ns_ * k}; }
    friend constexpr auto operator<=>(Time, Time) = default;

private:
    std::int64_t ns_ = 0;
};

constexpr Time nanoseconds(std::int64_t v) { return Time{v}; }
constexpr Time microseconds(std::int64_t v) { return Time{v * 1'000}; }
constexpr Time milliseconds(std::int64_t v) { return Time{v * 1'000'000}; }
constexpr Time seconds(std::int64_t v) { return Time{v * 1'000'000'000}; }

// Amount of data in bits.
struct Bits {
    std::int64_t value = 0;
    friend constexpr auto operator<=>(Bits, Bits) = default;
};

// Link rate in bits per second.
struct Bandwidth {
    std::int64_t bps = 0;
    friend constexpr auto operator<=>(Bandwidth, Bandwidth) = default;
};

constexpr Bits bytes(std::int64_t n) { return Bits{n * 8}; }
constexpr Bandwidth mbps(std::int64_t n) { return Bandwidth{n * 1'000'000}; }
constexpr Bandwidth gbps(std::int64_t n) { return Bandwidth{n * 1'000'000'000}; }

// packet_length / bandwidth, rounded half-up to the nearest nanosecond.
constexpr Time transmission_delay(Bits packet_length, Bandwidth bandwidth) {
    if (bandwidth.bps <= 0) {
        throw ModelError("transmission_delay: bandwidth must be positive");
    }
    if (packet_length.value < 0) {
        throw ModelError("transmission_delay: negative packet length");
    }
    const __int128 num = static_cast<__int128>(packet_length.value) * 1'000'000'000;
    const __int128 den = bandwidth.bps;
    return Time{static_cast<std::int64_t>((2 * num + den) / (2 * den))};
}

// Integer nanoseconds rendered as a decimal count of milliseconds, exact.
inline std::string format_ms(Time t) {
    std::int64_t ns = t.ns();
    std::string sign;
    if (ns < 0) {
        sign = "-";
        ns = -ns;
    }
    std::string frac = std::to_string(ns % 1'000'000);
    frac.insert(0, 6 - frac.size(), '0');
    while (!frac.empty() && frac.back() == '0') {
        frac.pop_back();
    }
    std::string out = sign + std::to_string(ns / 1'000'000);
    if (!frac.empty()) {
        out += "." + frac;
    }
    return out;
}

}  // namespace sdnrm
