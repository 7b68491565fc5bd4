#include "csarp/wire/dissect.hpp"

#include "csarp/wire/crc32.hpp"
#include "csarp/wire/hex.hpp"

#include <cstdio>

namespace csarp::wire {

namespace {

std::string hex16(std::uint16_t v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%04x", v);
    return buf;
}

std::string hex8(std::uint8_t v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%02x", v);
    return buf;
}

class Layout {
public:
    void add(std::string name, std::size_t width, std::string value) {
        fields_.push_back({std::move(name), offset_, width, std::move(value)});
        offset_ += width;
    }
    std::size_t offset() const { return offset_; }
    std::vector<FieldView> take() { return std::move(fields_); }

private:
    std::vector<FieldView> fields_;
    std::size_t offset_ = 0;
};

void add_arp(Layout& l, const StdArp& arp, const std::string& prefix) {
    l.add(prefix + "htype", 2, "1");
    l.add(prefix + "ptype", 2, "0x0800");
    l.add(prefix + "hlen", 1, "6");
    l.add(prefix + "plen", 1, "4");
    l.add(prefix + "oper", 2, arp.op == ArpOp::Request ? "1 (request)" : "2 (reply)");
    l.add(prefix + "sender_mac", 6, arp.sender_mac.to_string());
    l.add(prefix + "sender_ip", 4, arp.sender_ip.to_string());
    l.add(prefix + "target_mac", 6, arp.target_mac.to_string());
    l.add(prefix + "target_ip", 4, arp.target_ip.to_string());
}

}  // namespace

std::vector<FieldView> dissect(const Frame& frame) {
    Layout l;
    l.add("dest", 6, frame.dest.to_string());
    l.add("src", 6, frame.src.to_string());
    l.add("ethertype", 2, hex16(ether_type_of(frame.body)));

    if (const auto* arp = std::get_if<StdArp>(&frame.body)) {
        add_arp(l, *arp, "");
    } else {
        l.add("msg_type", 1,
              hex8(static_cast<std::uint8_t>(*msg_type_of(frame.body))) + " (" + body_name(frame.body) + ")");
        std::visit(
            [&](const auto& b) {
                using T = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<T, IpSend>) {
                    l.add("ip", 4, b.ip.to_string());
                    l.add("host_mac", 6, b.mac.to_string());
                } else if constexpr (std::is_same_v<T, IpReply>) {
                    l.add("ip", 4, b.ip.to_string());
                    l.add("host_mac", 6, b.mac.to_string());
                    l.add("ack", 1, b.ack ? "1" : "0");
                } else if constexpr (std::is_same_v<T, ArpCheck>) {
                    l.add("marker", 3, "\"ACH\"");
                    l.add("ip", 4, b.ip.to_string());
                } else if constexpr (std::is_same_v<T, ArpNoChange>) {
                    l.add("marker", 3, "\"ANC\"");
                    l.add("ip", 4, b.ip.to_string());
                } else if constexpr (std::is_same_v<T, ArpAck>) {
                    l.add("marker", 3, "\"ACK\"");
                    l.add("ip", 4, b.ip.to_string());
                } else if constexpr (std::is_same_v<T, SignedArpReply>) {
                    add_arp(l, b.inner, "arp.");
                }
            },
            frame.body);

        l.add("auth.kind", 1, hex8(static_cast<std::uint8_t>(auth_kind(frame.auth))));
        if (const auto* tag = std::get_if<KeyedTag>(&frame.auth)) {
            l.add("auth.tag", kTagLen, to_hex(tag->tag));
        } else if (const auto* sig = std::get_if<SignatureAuth>(&frame.auth)) {
            l.add("auth.signature", kSignatureLen, to_hex(sig->signature));
            l.add("auth.cert_len", 2, std::to_string(sig->cert.size()));
            l.add("auth.cert", sig->cert.size(), to_hex(sig->cert));
        }
    }

    const auto bytes = encode_frame(frame);
    const auto fcs = compute_fcs(std::span(bytes).first(bytes.size() - kFcsLen));
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", fcs);
    l.add("fcs", kFcsLen, buf);
    return l.take();
}

std::vector<FieldView> dissect(const DhcpFrame& frame) {
    Layout l;
    l.add("dest", 6, frame.dest.to_string());
    l.add("src", 6, frame.src.to_string());
    l.add("ethertype", 2, hex16(kEtherTypeDhcpLite));
    const auto& m = frame.msg;
    l.add("op", 1, hex8(static_cast<std::uint8_t>(m.op)) + " (" + to_string(m.op) + ")");
    char xid[16];
    std::snprintf(xid, sizeof xid, "0x%08x", m.xid);
    l.add("xid", 4, xid);
    l.add("client_mac", 6, m.client_mac.to_string());
    l.add("your_ip", 4, m.your_ip.to_string());
    l.add("server_mac", 6, m.server_mac.to_string());
    l.add("central_mac", 6, m.central_mac.to_string());
    const auto bytes = encode_dhcp(frame);
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", compute_fcs(std::span(bytes).first(bytes.size() - kFcsLen)));
    l.add("fcs", kFcsLen, buf);
    return l.take();
}

}  // namespace csarp::wire
