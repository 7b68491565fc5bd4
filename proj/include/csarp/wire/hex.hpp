#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csarp::wire {

enum class HexErrc { BadHexDigit, OddLength };

class HexError : public std::runtime_error {
public:
    HexError(HexErrc code, std::size_t position);
    HexErrc code() const noexcept { return code_; }
    // Index into the input text (BadHexDigit) or the digit count (OddLength).
    std::size_t position() const noexcept { return position_; }

private:
    HexErrc code_;
    std::size_t position_;
};

// Lowercase, no separators.
std::string to_hex(std::span<const std::uint8_t> bytes);

// Whitespace is skipped anywhere in the input.
std::vector<std::uint8_t> parse_hex(std::string_view text);

}  // namespace csarp::wire
