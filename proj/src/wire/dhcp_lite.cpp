#include "csarp/wire/dhcp_lite.hpp"

#include "csarp/wire/crc32.hpp"
#include "csarp/wire/frame.hpp"

#include <algorithm>

namespace csarp::wire {

namespace {

constexpr std::size_t kDhcpLen = kMacHeaderLen + 1 + 4 + 6 + 4 + 6 + 6 + kFcsLen;

template <std::size_t N>
void put(std::vector<std::uint8_t>& out, const std::array<std::uint8_t, N>& a) {
    out.insert(out.end(), a.begin(), a.end());
}

template <std::size_t N>
std::array<std::uint8_t, N> get(std::span<const std::uint8_t> in, std::size_t at) {
    std::array<std::uint8_t, N> a{};
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(at), N, a.begin());
    return a;
}

std::uint16_t ether_type_at(std::span<const std::uint8_t> bytes) {
    return static_cast<std::uint16_t>((bytes[12] << 8) | bytes[13]);
}

}  // namespace

std::vector<std::uint8_t> encode_dhcp(const DhcpFrame& frame) {
    std::vector<std::uint8_t> out;
    out.reserve(kDhcpLen);
    put(out, frame.dest.octets);
    put(out, frame.src.octets);
    out.push_back(static_cast<std::uint8_t>(kEtherTypeDhcpLite >> 8));
    out.push_back(static_cast<std::uint8_t>(kEtherTypeDhcpLite & 0xFF));
    out.push_back(static_cast<std::uint8_t>(frame.msg.op));
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(frame.msg.xid >> shift));
    put(out, frame.msg.client_mac.octets);
    put(out, frame.msg.your_ip.octets);
    put(out, frame.msg.server_mac.octets);
    put(out, frame.msg.central_mac.octets);
    const auto fcs = compute_fcs(out);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(fcs >> (8 * i)));
    return out;
}

DhcpFrame decode_dhcp(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kMacHeaderLen) throw DecodeError(DecodeErrc::TruncatedFrame, bytes.size());
    if (ether_type_at(bytes) != kEtherTypeDhcpLite) throw DecodeError(DecodeErrc::BadEtherType, 12);
    if (bytes.size() < kDhcpLen) throw DecodeError(DecodeErrc::TruncatedFrame, bytes.size());
    if (bytes.size() > kDhcpLen) throw DecodeError(DecodeErrc::TrailingBytes, kDhcpLen);
    const auto op = bytes[14];
    if (op < 1 || op > 4) throw DecodeError(DecodeErrc::UnknownMsgType, 14);
    const auto body_end = kDhcpLen - kFcsLen;
    const auto fcs = std::uint32_t{bytes[body_end]} | (std::uint32_t{bytes[body_end + 1]} << 8) |
                     (std::uint32_t{bytes[body_end + 2]} << 16) | (std::uint32_t{bytes[body_end + 3]} << 24);
    if (fcs != compute_fcs(bytes.first(body_end))) throw DecodeError(DecodeErrc::BadFcs, body_end);

    DhcpFrame f;
    f.dest = MacAddr{get<6>(bytes, 0)};
    f.src = MacAddr{get<6>(bytes, 6)};
    f.msg.op = static_cast<DhcpOp>(op);
    f.msg.xid = (std::uint32_t{bytes[15]} << 24) | (std::uint32_t{bytes[16]} << 16) |
                (std::uint32_t{bytes[17]} << 8) | std::uint32_t{bytes[18]};
    f.msg.client_mac = MacAddr{get<6>(bytes, 19)};
    f.msg.your_ip = Ipv4Addr{get<4>(bytes, 25)};
    f.msg.server_mac = MacAddr{get<6>(bytes, 29)};
    f.msg.central_mac = MacAddr{get<6>(bytes, 35)};
    return f;
}

const char* to_string(DhcpOp op) noexcept {
    switch (op) {
        case DhcpOp::Discover: return "DhcpDiscover";
        case DhcpOp::Offer: return "DhcpOffer";
        case DhcpOp::Request: return "DhcpRequest";
        case DhcpOp::Ack: return "DhcpAck";
    }
    return "Dhcp?";
}

std::string peek_kind(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kMacHeaderLen + 1) return "Unknown";
    switch (ether_type_at(bytes)) {
        case kEtherTypeArp:
            if (bytes.size() >= kMacHeaderLen + 8) {
                const auto op = (bytes[20] << 8) | bytes[21];
                if (op == 1) return "ArpRequest";
                if (op == 2) return "ArpReply";
            }
            return "Unknown";
        case kEtherTypeSecure:
            switch (bytes[14]) {
                case 0x01: return "IpSend";
                case 0x02: return "IpReply";
                case 0x03: return "ArpCheck";
                case 0x04: return "ArpNoChange";
                case 0x05: return "ArpAck";
                case 0x06: return "SignedArpReply";
                default: return "Unknown";
            }
        case kEtherTypeDhcpLite:
            if (bytes[14] >= 1 && bytes[14] <= 4) return to_string(static_cast<DhcpOp>(bytes[14]));
            return "Unknown";
        default:
            return "Unknown";
    }
}

bool peek_dest(std::span<const std::uint8_t> bytes, MacAddr& out) noexcept {
    if (bytes.size() < 6) return false;
    std::copy_n(bytes.begin(), 6, out.octets.begin());
    return true;
}

}  // namespace csarp::wire
