#include "csarp/wire/addr.hpp"

#include <charconv>
#include <cstdio>

namespace csarp::wire {

std::string MacAddr::to_string() const {
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x",
                  octets[0], octets[1], octets[2], octets[3], octets[4], octets[5]);
    return buf;
}

std::optional<MacAddr> MacAddr::parse(std::string_view text) {
    if (text.size() != 17) return std::nullopt;
    MacAddr mac;
    for (std::size_t i = 0; i < 6; ++i) {
        const auto pos = i * 3;
        if (i > 0 && text[pos - 1] != ':' && text[pos - 1] != '-') return std::nullopt;
        unsigned value = 0;
        const auto* first = text.data() + pos;
        auto [ptr, ec] = std::from_chars(first, first + 2, value, 16);
        if (ec != std::errc{} || ptr != first + 2) return std::nullopt;
        mac.octets[i] = static_cast<std::uint8_t>(value);
    }
    return mac;
}

std::string Ipv4Addr::to_string() const {
    return std::to_string(octets[0]) + '.' + std::to_string(octets[1]) + '.' +
           std::to_string(octets[2]) + '.' + std::to_string(octets[3]);
}

std::optional<Ipv4Addr> Ipv4Addr::parse(std::string_view text) {
    Ipv4Addr ip;
    const char* cur = text.data();
    const char* end = text.data() + text.size();
    for (std::size_t i = 0; i < 4; ++i) {
        if (i > 0) {
            if (cur == end || *cur != '.') return std::nullopt;
            ++cur;
        }
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(cur, end, value, 10);
        if (ec != std::errc{} || ptr == cur || ptr - cur > 3 || value > 255) return std::nullopt;
        ip.octets[i] = static_cast<std::uint8_t>(value);
        cur = ptr;
    }
    if (cur != end) return std::nullopt;
    return ip;
}

}  // namespace csarp::wire
