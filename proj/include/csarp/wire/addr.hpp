#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace csarp::wire {

struct MacAddr {
    std::array<std::uint8_t, 6> octets{};

    static constexpr MacAddr broadcast() noexcept {
        return MacAddr{{0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF}};
    }

    constexpr bool is_broadcast() const noexcept { return *this == broadcast(); }

    // Locally administered unicast address 02:00:xx:xx:xx:xx built from a 32-bit index.
    static constexpr MacAddr local(std::uint32_t index) noexcept {
        return MacAddr{{0x02, 0x00,
                        static_cast<std::uint8_t>(index >> 24),
                        static_cast<std::uint8_t>(index >> 16),
                        static_cast<std::uint8_t>(index >> 8),
                        static_cast<std::uint8_t>(index)}};
    }

    std::string to_string() const;
    // Accepts "aa:bb:cc:dd:ee:ff" or "aa-bb-...", case-insensitive.
    static std::optional<MacAddr> parse(std::string_view text);

    friend constexpr auto operator<=>(const MacAddr&, const MacAddr&) = default;
};

struct Ipv4Addr {
    std::array<std::uint8_t, 4> octets{};  // network byte order

    static constexpr Ipv4Addr from_u32(std::uint32_t host_order) noexcept {
        return Ipv4Addr{{static_cast<std::uint8_t>(host_order >> 24),
                         static_cast<std::uint8_t>(host_order >> 16),
                         static_cast<std::uint8_t>(host_order >> 8),
                         static_cast<std::uint8_t>(host_order)}};
    }
    constexpr std::uint32_t to_u32() const noexcept {
        return (std::uint32_t{octets[0]} << 24) | (std::uint32_t{octets[1]} << 16) |
               (std::uint32_t{octets[2]} << 8) | std::uint32_t{octets[3]};
    }

    std::string to_string() const;
    static std::optional<Ipv4Addr> parse(std::string_view text);

    friend constexpr auto operator<=>(const Ipv4Addr&, const Ipv4Addr&) = default;
};

}  // namespace csarp::wire

template <>
struct std::hash<csarp::wire::MacAddr> {
    std::size_t operator()(const csarp::wire::MacAddr& m) const noexcept {
        std::uint64_t v = 0;
        for (auto o : m.octets) v = (v << 8) | o;
        return std::hash<std::uint64_t>{}(v);
    }
};

template <>
struct std::hash<csarp::wire::Ipv4Addr> {
    std::size_t operator()(const csarp::wire::Ipv4Addr& ip) const noexcept {
        return std::hash<std::uint32_t>{}(ip.to_u32());
    }
};
