#pragma once

#include "csarp/wire/addr.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace csarp::wire {

// Stripped-down DHCP exchange for the simulator: no options, no UDP/IP
// headers. Layout: dest(6) | src(6) | 0x88B6 | op(1) | xid(4) | client_mac(6)
// | your_ip(4) | server_mac(6) | central_mac(6) | fcs(4).
inline constexpr std::uint16_t kEtherTypeDhcpLite = 0x88B6;

enum class DhcpOp : std::uint8_t { Discover = 1, Offer = 2, Request = 3, Ack = 4 };

struct DhcpMessage {
    DhcpOp op = DhcpOp::Discover;
    std::uint32_t xid = 0;
    MacAddr client_mac;
    Ipv4Addr your_ip;
    MacAddr server_mac;
    MacAddr central_mac;  // all-zero when no Central Server is deployed
    friend bool operator==(const DhcpMessage&, const DhcpMessage&) = default;
};

struct DhcpFrame {
    MacAddr dest;
    MacAddr src;
    DhcpMessage msg;
    friend bool operator==(const DhcpFrame&, const DhcpFrame&) = default;
};

std::vector<std::uint8_t> encode_dhcp(const DhcpFrame& frame);
// Throws DecodeError.
DhcpFrame decode_dhcp(std::span<const std::uint8_t> bytes);

const char* to_string(DhcpOp op) noexcept;

// Cheap classification from the header bytes alone, for traces:
// "ArpRequest", "ArpReply", "IpSend", ..., "DhcpDiscover", or "Unknown".
std::string peek_kind(std::span<const std::uint8_t> bytes);

// Destination MAC of a raw frame, if at least 6 bytes are present.
bool peek_dest(std::span<const std::uint8_t> bytes, MacAddr& out) noexcept;

}  // namespace csarp::wire
