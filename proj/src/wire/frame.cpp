#include "csarp/wire/frame.hpp"

#include "csarp/wire/crc32.hpp"

#include <algorithm>
#include <string_view>

namespace csarp::wire {

namespace {

constexpr std::string_view kMarkerCheck = "ACH";
constexpr std::string_view kMarkerNoChange = "ANC";
constexpr std::string_view kMarkerAck = "ACK";

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) {
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
        out_.push_back(static_cast<std::uint8_t>(v));
    }
    template <std::size_t N>
    void bytes(const std::array<std::uint8_t, N>& a) {
        out_.insert(out_.end(), a.begin(), a.end());
    }
    void bytes(std::span<const std::uint8_t> s) { out_.insert(out_.end(), s.begin(), s.end()); }
    void text(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
    void mac(const MacAddr& m) { bytes(m.octets); }
    void ip(const Ipv4Addr& a) { bytes(a.octets); }

    std::vector<std::uint8_t>& buffer() { return out_; }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return in_.size() - pos_; }

    void need(std::size_t n) const {
        if (remaining() < n) throw DecodeError(DecodeErrc::TruncatedFrame, pos_);
    }
    std::uint8_t u8() {
        need(1);
        return in_[pos_++];
    }
    std::uint16_t u16() {
        need(2);
        const auto v = static_cast<std::uint16_t>((in_[pos_] << 8) | in_[pos_ + 1]);
        pos_ += 2;
        return v;
    }
    template <std::size_t N>
    std::array<std::uint8_t, N> array() {
        need(N);
        std::array<std::uint8_t, N> a{};
        std::copy_n(in_.begin() + static_cast<std::ptrdiff_t>(pos_), N, a.begin());
        pos_ += N;
        return a;
    }
    std::span<const std::uint8_t> take(std::size_t n) {
        need(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    MacAddr mac() { return MacAddr{array<6>()}; }
    Ipv4Addr ip() { return Ipv4Addr{array<4>()}; }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

void write_arp(Writer& w, const StdArp& arp) {
    w.u16(1);       // htype: Ethernet
    w.u16(0x0800);  // ptype: IPv4
    w.u8(6);
    w.u8(4);
    w.u16(static_cast<std::uint16_t>(arp.op));
    w.mac(arp.sender_mac);
    w.ip(arp.sender_ip);
    w.mac(arp.target_mac);
    w.ip(arp.target_ip);
}

StdArp read_arp(Reader& r) {
    const auto start = r.offset();
    r.need(kArpPayloadLen);
    if (r.u16() != 1) throw DecodeError(DecodeErrc::MalformedField, start);
    if (r.u16() != 0x0800) throw DecodeError(DecodeErrc::MalformedField, start + 2);
    if (r.u8() != 6) throw DecodeError(DecodeErrc::MalformedField, start + 4);
    if (r.u8() != 4) throw DecodeError(DecodeErrc::MalformedField, start + 5);
    const auto op = r.u16();
    if (op != 1 && op != 2) throw DecodeError(DecodeErrc::MalformedField, start + 6);
    StdArp arp;
    arp.op = static_cast<ArpOp>(op);
    arp.sender_mac = r.mac();
    arp.sender_ip = r.ip();
    arp.target_mac = r.mac();
    arp.target_ip = r.ip();
    return arp;
}

void expect_marker(Reader& r, std::string_view marker) {
    const auto at = r.offset();
    auto got = r.take(marker.size());
    if (!std::equal(got.begin(), got.end(), marker.begin(),
                    [](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); })) {
        throw DecodeError(DecodeErrc::BadMarker, at);
    }
}

struct BodyWriter {
    Writer& w;
    void operator()(const IpSend& b) {
        w.ip(b.ip);
        w.mac(b.mac);
    }
    void operator()(const IpReply& b) {
        w.ip(b.ip);
        w.mac(b.mac);
        w.u8(b.ack ? 0x01 : 0x00);
    }
    void operator()(const ArpCheck& b) {
        w.text(kMarkerCheck);
        w.ip(b.ip);
    }
    void operator()(const ArpNoChange& b) {
        w.text(kMarkerNoChange);
        w.ip(b.ip);
    }
    void operator()(const ArpAck& b) {
        w.text(kMarkerAck);
        w.ip(b.ip);
    }
    void operator()(const StdArp& b) { write_arp(w, b); }
    void operator()(const SignedArpReply& b) { write_arp(w, b.inner); }
};

void write_covered(Writer& w, const Frame& frame) {
    w.mac(frame.dest);
    w.mac(frame.src);
    w.u16(ether_type_of(frame.body));
    if (const auto type = msg_type_of(frame.body)) w.u8(static_cast<std::uint8_t>(*type));
    std::visit(BodyWriter{w}, frame.body);
}

Body read_body(Reader& r, std::uint8_t msg_type, std::size_t type_offset) {
    switch (msg_type) {
        case 0x01: {
            IpSend b;
            b.ip = r.ip();
            b.mac = r.mac();
            return b;
        }
        case 0x02: {
            IpReply b;
            b.ip = r.ip();
            b.mac = r.mac();
            const auto at = r.offset();
            const auto ack = r.u8();
            if ((ack & 0xFE) != 0) throw DecodeError(DecodeErrc::MalformedField, at);
            b.ack = (ack & 0x01) != 0;
            return b;
        }
        case 0x03:
            expect_marker(r, kMarkerCheck);
            return ArpCheck{r.ip()};
        case 0x04:
            expect_marker(r, kMarkerNoChange);
            return ArpNoChange{r.ip()};
        case 0x05:
            expect_marker(r, kMarkerAck);
            return ArpAck{r.ip()};
        case 0x06:
            return SignedArpReply{read_arp(r)};
        default:
            throw DecodeError(DecodeErrc::UnknownMsgType, type_offset);
    }
}

AuthSection read_auth(Reader& r, AuthKind required) {
    const auto at = r.offset();
    const auto kind = r.u8();
    if (kind != static_cast<std::uint8_t>(required)) throw DecodeError(DecodeErrc::BadAuthKind, at);
    if (required == AuthKind::KeyedTag) return KeyedTag{r.array<kTagLen>()};
    SignatureAuth sig;
    sig.signature = r.array<kSignatureLen>();
    const auto cert_len = r.u16();
    auto cert = r.take(cert_len);
    sig.cert.assign(cert.begin(), cert.end());
    return sig;
}

}  // namespace

const char* to_string(DecodeErrc code) noexcept {
    switch (code) {
        case DecodeErrc::TruncatedFrame: return "TruncatedFrame";
        case DecodeErrc::BadFcs: return "BadFcs";
        case DecodeErrc::BadMarker: return "BadMarker";
        case DecodeErrc::UnknownMsgType: return "UnknownMsgType";
        case DecodeErrc::BadEtherType: return "BadEtherType";
        case DecodeErrc::BadAuthKind: return "BadAuthKind";
        case DecodeErrc::MalformedField: return "MalformedField";
        case DecodeErrc::TrailingBytes: return "TrailingBytes";
    }
    return "DecodeError";
}

DecodeError::DecodeError(DecodeErrc code, std::size_t offset)
    : std::runtime_error(std::string(to_string(code)) + " at offset " + std::to_string(offset)),
      code_(code),
      offset_(offset) {}

AuthKind auth_kind(const AuthSection& auth) noexcept {
    return static_cast<AuthKind>(auth.index());
}

AuthKind required_auth_kind(const Body& body) noexcept {
    if (std::holds_alternative<StdArp>(body)) return AuthKind::None;
    if (std::holds_alternative<IpSend>(body) || std::holds_alternative<IpReply>(body)) {
        return AuthKind::KeyedTag;
    }
    return AuthKind::Signature;
}

const char* body_name(const Body& body) noexcept {
    static constexpr const char* kNames[] = {"IpSend",      "IpReply", "ArpCheck", "ArpNoChange",
                                             "ArpAck",      "StdArp",  "SignedArpReply"};
    return kNames[body.index()];
}

std::optional<MsgType> msg_type_of(const Body& body) noexcept {
    struct V {
        std::optional<MsgType> operator()(const IpSend&) const { return MsgType::IpSend; }
        std::optional<MsgType> operator()(const IpReply&) const { return MsgType::IpReply; }
        std::optional<MsgType> operator()(const ArpCheck&) const { return MsgType::ArpCheck; }
        std::optional<MsgType> operator()(const ArpNoChange&) const { return MsgType::ArpNoChange; }
        std::optional<MsgType> operator()(const ArpAck&) const { return MsgType::ArpAck; }
        std::optional<MsgType> operator()(const SignedArpReply&) const { return MsgType::SignedArpReply; }
        std::optional<MsgType> operator()(const StdArp&) const { return std::nullopt; }
    };
    return std::visit(V{}, body);
}

std::uint16_t ether_type_of(const Body& body) noexcept {
    return std::holds_alternative<StdArp>(body) ? kEtherTypeArp : kEtherTypeSecure;
}

std::vector<std::uint8_t> authenticated_bytes(const Frame& frame) {
    Writer w;
    write_covered(w, frame);
    return std::move(w.buffer());
}

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
    if (auth_kind(frame.auth) != required_auth_kind(frame.body)) {
        throw std::invalid_argument(std::string("auth section does not match ") + body_name(frame.body));
    }
    Writer w;
    write_covered(w, frame);
    if (!std::holds_alternative<StdArp>(frame.body)) {
        w.u8(static_cast<std::uint8_t>(auth_kind(frame.auth)));
        if (const auto* tag = std::get_if<KeyedTag>(&frame.auth)) {
            w.bytes(tag->tag);
        } else if (const auto* sig = std::get_if<SignatureAuth>(&frame.auth)) {
            if (sig->cert.size() > kMaxCertLen) throw std::invalid_argument("certificate too long");
            w.bytes(sig->signature);
            w.u16(static_cast<std::uint16_t>(sig->cert.size()));
            w.bytes(sig->cert);
        }
    }
    // FCS goes out least significant byte first, as on an 802.3 wire.
    const auto fcs = compute_fcs(w.buffer());
    for (int i = 0; i < 4; ++i) w.u8(static_cast<std::uint8_t>(fcs >> (8 * i)));
    return std::move(w.buffer());
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    Frame frame;
    frame.dest = r.mac();
    frame.src = r.mac();
    const auto ether_at = r.offset();
    const auto ether_type = r.u16();
    if (ether_type == kEtherTypeArp) {
        frame.body = read_arp(r);
        frame.auth = NoAuth{};
    } else if (ether_type == kEtherTypeSecure) {
        const auto type_at = r.offset();
        const auto msg_type = r.u8();
        frame.body = read_body(r, msg_type, type_at);
        frame.auth = read_auth(r, required_auth_kind(frame.body));
    } else {
        throw DecodeError(DecodeErrc::BadEtherType, ether_at);
    }

    const auto fcs_at = r.offset();
    if (r.remaining() < kFcsLen) throw DecodeError(DecodeErrc::TruncatedFrame, fcs_at);
    if (r.remaining() > kFcsLen) throw DecodeError(DecodeErrc::TrailingBytes, fcs_at + kFcsLen);
    const auto wire_fcs = r.array<kFcsLen>();
    const std::uint32_t got = std::uint32_t{wire_fcs[0]} | (std::uint32_t{wire_fcs[1]} << 8) |
                              (std::uint32_t{wire_fcs[2]} << 16) | (std::uint32_t{wire_fcs[3]} << 24);
    if (got != compute_fcs(bytes.first(fcs_at))) throw DecodeError(DecodeErrc::BadFcs, fcs_at);
    return frame;
}

}  // namespace csarp::wire
