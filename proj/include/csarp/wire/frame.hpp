#pragma once

#include "csarp/wire/addr.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace csarp::wire {

inline constexpr std::uint16_t kEtherTypeArp = 0x0806;
inline constexpr std::uint16_t kEtherTypeSecure = 0x88B5;

inline constexpr std::size_t kMacHeaderLen = 14;  // dest | src | ethertype
inline constexpr std::size_t kArpPayloadLen = 28;
inline constexpr std::size_t kFcsLen = 4;
inline constexpr std::size_t kTagLen = 32;
inline constexpr std::size_t kSignatureLen = 64;
inline constexpr std::size_t kMaxCertLen = 0xFFFF;

enum class MsgType : std::uint8_t {
    IpSend = 0x01,
    IpReply = 0x02,
    ArpCheck = 0x03,
    ArpNoChange = 0x04,
    ArpAck = 0x05,
    SignedArpReply = 0x06,
};

enum class ArpOp : std::uint16_t { Request = 1, Reply = 2 };

struct IpSend {
    Ipv4Addr ip;
    MacAddr mac;
    friend bool operator==(const IpSend&, const IpSend&) = default;
};

struct IpReply {
    Ipv4Addr ip;
    MacAddr mac;
    bool ack = false;
    friend bool operator==(const IpReply&, const IpReply&) = default;
};

// The three check-procedure messages carry a fixed 3-byte ASCII marker
// ("ACH", "ANC", "ACK") implied by the type.
struct ArpCheck {
    Ipv4Addr ip;
    friend bool operator==(const ArpCheck&, const ArpCheck&) = default;
};

struct ArpNoChange {
    Ipv4Addr ip;
    friend bool operator==(const ArpNoChange&, const ArpNoChange&) = default;
};

struct ArpAck {
    Ipv4Addr ip;
    friend bool operator==(const ArpAck&, const ArpAck&) = default;
};

// RFC 826 payload for Ethernet/IPv4 (htype 1, ptype 0x0800, hlen 6, plen 4).
struct StdArp {
    ArpOp op = ArpOp::Request;
    MacAddr sender_mac;
    Ipv4Addr sender_ip;
    MacAddr target_mac;
    Ipv4Addr target_ip;
    friend bool operator==(const StdArp&, const StdArp&) = default;
};

struct SignedArpReply {
    StdArp inner;
    friend bool operator==(const SignedArpReply&, const SignedArpReply&) = default;
};

using Body = std::variant<IpSend, IpReply, ArpCheck, ArpNoChange, ArpAck, StdArp, SignedArpReply>;

enum class AuthKind : std::uint8_t { None = 0x00, KeyedTag = 0x01, Signature = 0x02 };

struct NoAuth {
    friend bool operator==(const NoAuth&, const NoAuth&) = default;
};

struct KeyedTag {
    std::array<std::uint8_t, kTagLen> tag{};
    friend bool operator==(const KeyedTag&, const KeyedTag&) = default;
};

struct SignatureAuth {
    std::array<std::uint8_t, kSignatureLen> signature{};
    std::vector<std::uint8_t> cert;  // serialized certificate, opaque at this layer
    friend bool operator==(const SignatureAuth&, const SignatureAuth&) = default;
};

using AuthSection = std::variant<NoAuth, KeyedTag, SignatureAuth>;

struct Frame {
    MacAddr dest;
    MacAddr src;
    Body body;
    AuthSection auth;
    friend bool operator==(const Frame&, const Frame&) = default;
};

AuthKind auth_kind(const AuthSection& auth) noexcept;
// The one auth kind each body type may carry.
AuthKind required_auth_kind(const Body& body) noexcept;
const char* body_name(const Body& body) noexcept;
// Empty for StdArp, which travels under EtherType 0x0806 without a msg_type byte.
std::optional<MsgType> msg_type_of(const Body& body) noexcept;
std::uint16_t ether_type_of(const Body& body) noexcept;

enum class DecodeErrc {
    TruncatedFrame,
    BadFcs,
    BadMarker,
    UnknownMsgType,
    BadEtherType,
    BadAuthKind,
    MalformedField,
    TrailingBytes,
};

const char* to_string(DecodeErrc code) noexcept;

class DecodeError : public std::runtime_error {
public:
    DecodeError(DecodeErrc code, std::size_t offset);
    DecodeErrc code() const noexcept { return code_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    DecodeErrc code_;
    std::size_t offset_;
};

// Throws std::invalid_argument if the auth section does not match the body
// type or a certificate exceeds kMaxCertLen.
std::vector<std::uint8_t> encode_frame(const Frame& frame);

// The bytes covered by a keyed tag or signature: dest through body inclusive.
std::vector<std::uint8_t> authenticated_bytes(const Frame& frame);

// Structural parse first, FCS last, so structural errors report their own
// offset. Throws DecodeError.
Frame decode_frame(std::span<const std::uint8_t> bytes);

}  // namespace csarp::wire
