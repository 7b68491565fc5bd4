#pragma once

#include <cstdint>
#include <span>

namespace csarp::wire {

// CRC-32 as used by the IEEE 802.3 FCS: reflected polynomial 0xEDB88320,
// init 0xFFFFFFFF, final xor 0xFFFFFFFF.
std::uint32_t compute_fcs(std::span<const std::uint8_t> bytes) noexcept;

}  // namespace csarp::wire
