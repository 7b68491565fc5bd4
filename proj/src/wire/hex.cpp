#include "csarp/wire/hex.hpp"

#include <cctype>

namespace csarp::wire {

namespace {

const char* message_for(HexErrc code) {
    switch (code) {
        case HexErrc::BadHexDigit: return "BadHexDigit";
        case HexErrc::OddLength: return "OddLength";
    }
    return "hex error";
}

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

HexError::HexError(HexErrc code, std::size_t position)
    : std::runtime_error(std::string(message_for(code)) + " at " + std::to_string(position)),
      code_(code),
      position_(position) {}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0F]);
    }
    return out;
}

std::vector<std::uint8_t> parse_hex(std::string_view text) {
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 2);
    int high = -1;
    std::size_t digits = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        const int v = nibble(c);
        if (v < 0) throw HexError(HexErrc::BadHexDigit, i);
        ++digits;
        if (high < 0) {
            high = v;
        } else {
            out.push_back(static_cast<std::uint8_t>((high << 4) | v));
            high = -1;
        }
    }
    if (high >= 0) throw HexError(HexErrc::OddLength, digits);
    return out;
}

}  // namespace csarp::wire
