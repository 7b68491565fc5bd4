#include "csarp/protocol/central_server.hpp"

#include "csarp/crypto/frame_auth.hpp"
#include "csarp/wire/dhcp_lite.hpp"

#include <algorithm>

namespace csarp::protocol {

const char* to_string(Mode mode) noexcept { return mode == Mode::Secure ? "secure" : "baseline"; }

const char* to_string(CentralEvent event) noexcept {
    switch (event) {
        case CentralEvent::TableInstalled: return "TableInstalled";
        case CentralEvent::BadTag: return "BadTag";
        case CentralEvent::BadFrame: return "BadFrame";
        case CentralEvent::RateLimited: return "RateLimited";
        case CentralEvent::UnknownIp: return "UnknownIp";
        case CentralEvent::AlreadyCurrent: return "AlreadyCurrent";
        case CentralEvent::DuplicatePending: return "DuplicatePending";
        case CentralEvent::CheckStarted: return "CheckStarted";
        case CentralEvent::CheckKept: return "CheckKept";
        case CentralEvent::CheckCommitted: return "CheckCommitted";
        case CentralEvent::LateCheckReply: return "LateCheckReply";
        case CentralEvent::ResolveAnswered: return "ResolveAnswered";
        case CentralEvent::ResolveMiss: return "ResolveMiss";
    }
    return "?";
}

RateLimiter::RateLimiter(std::uint32_t limit, Tick window)
    : limit_(limit), window_(std::max<Tick>(window, 1)), credit_(std::uint64_t{limit} * window_) {}

bool RateLimiter::admit(Tick now) {
    const auto cap = limit_ * window_;
    const auto elapsed = now - last_;
    last_ = now;
    // A full window refills the bucket completely, so clamp elapsed to avoid overflow.
    credit_ = std::min(cap, credit_ + std::min<std::uint64_t>(elapsed, window_) * limit_);
    if (credit_ < window_) return false;
    credit_ -= window_;
    return true;
}

CentralServer::CentralServer(CentralConfig config, crypto::SharedKey dhcp_key, crypto::KeyPair keys,
                             crypto::Certificate cert)
    : config_(config),
      dhcp_key_(dhcp_key),
      keys_(std::move(keys)),
      cert_bytes_(cert.serialize()),
      cert_(std::move(cert)),
      limiter_(config.rate_limit, config.rate_window) {}

std::size_t CentralServer::count(CentralEvent event) const {
    return static_cast<std::size_t>(
        std::count_if(log_.begin(), log_.end(), [&](const CentralLogEntry& e) { return e.event == event; }));
}

void CentralServer::note(CentralEvent event, wire::Ipv4Addr ip, wire::MacAddr mac) {
    log_.push_back({now(), event, ip, mac});
}

void CentralServer::send_signed(wire::MacAddr dest, wire::Body body) {
    wire::Frame f{dest, mac(), std::move(body), wire::NoAuth{}};
    f.auth = wire::SignatureAuth{crypto::sign(keys_, wire::authenticated_bytes(f)), cert_bytes_};
    send(wire::encode_frame(f));
}

void CentralServer::on_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= wire::kMacHeaderLen && bytes[12] == (wire::kEtherTypeDhcpLite >> 8) &&
        bytes[13] == (wire::kEtherTypeDhcpLite & 0xFF)) {
        return;  // DHCP is not ours
    }
    wire::Frame frame;
    try {
        frame = wire::decode_frame(bytes);
    } catch (const wire::DecodeError&) {
        note(CentralEvent::BadFrame, {}, {});
        return;
    }
    if (frame.dest != mac() && !frame.dest.is_broadcast()) return;

    if (std::holds_alternative<wire::IpSend>(frame.body)) {
        on_ip_send(frame);
    } else if (const auto* arp = std::get_if<wire::StdArp>(&frame.body)) {
        if (arp->op == wire::ArpOp::Request) {
            on_arp_request(frame, *arp);
        } else {
            on_arp_reply(frame, *arp);
        }
    }
}

void CentralServer::on_ip_send(const wire::Frame& frame) {
    const auto& msg = std::get<wire::IpSend>(frame.body);
    if (!crypto::check_tag(frame, dhcp_key_)) {
        note(CentralEvent::BadTag, msg.ip, msg.mac);
        return;
    }
    table_[msg.ip] = msg.mac;
    note(CentralEvent::TableInstalled, msg.ip, msg.mac);

    wire::Frame reply{frame.src, mac(), wire::IpReply{msg.ip, msg.mac, true}, wire::NoAuth{}};
    crypto::seal_with_tag(reply, dhcp_key_);
    send(wire::encode_frame(reply));
}

void CentralServer::on_arp_request(const wire::Frame& frame, const wire::StdArp& arp) {
    const auto it = table_.find(arp.target_ip);
    if (it == table_.end()) {
        note(CentralEvent::ResolveMiss, arp.target_ip, arp.sender_mac);
        return;
    }
    note(CentralEvent::ResolveAnswered, arp.target_ip, it->second);
    send_signed(frame.src, wire::SignedArpReply{wire::StdArp{wire::ArpOp::Reply, it->second, arp.target_ip,
                                                             arp.sender_mac, arp.sender_ip}});
}

void CentralServer::on_arp_reply(const wire::Frame& frame, const wire::StdArp& arp) {
    const auto ip = arp.sender_ip;
    const auto claimed = arp.sender_mac;

    // A probe answer from the MAC under check.
    if (auto it = pending_.find(ip);
        it != pending_.end() && claimed == it->second.old_mac && frame.src == it->second.old_mac) {
        on_check_reply(it->second);
        return;
    }
    if (auto it = closed_.find(ip); it != closed_.end() && claimed == it->second.old_mac &&
                                    frame.src == it->second.old_mac &&
                                    now() <= it->second.closed_at + config_.check_timeout) {
        note(CentralEvent::LateCheckReply, ip, claimed);
        return;
    }

    if (!limiter_.admit(now())) {
        note(CentralEvent::RateLimited, ip, claimed);
        return;
    }
    const auto entry = table_.find(ip);
    if (entry == table_.end()) {
        note(CentralEvent::UnknownIp, ip, claimed);
        return;
    }
    if (entry->second == claimed) {
        note(CentralEvent::AlreadyCurrent, ip, claimed);
        send_signed(frame.src, wire::ArpAck{ip});
        return;
    }
    if (pending_.count(ip)) {
        note(CentralEvent::DuplicatePending, ip, claimed);
        return;
    }

    PendingCheck check;
    check.ip = ip;
    check.old_mac = entry->second;
    check.new_mac = claimed;
    check.initiator_mac = frame.src;
    check.probes_sent = config_.n_probes;
    check.deadline = now() + config_.check_timeout;
    check.generation = next_generation_++;
    closed_.erase(ip);
    note(CentralEvent::CheckStarted, ip, claimed);

    // Every probe is byte-identical, so sign once and send the burst.
    wire::Frame probe{check.old_mac, mac(), wire::ArpCheck{ip}, wire::NoAuth{}};
    probe.auth = wire::SignatureAuth{crypto::sign(keys_, wire::authenticated_bytes(probe)), cert_bytes_};
    const auto bytes = wire::encode_frame(probe);
    for (std::uint32_t i = 0; i < config_.n_probes; ++i) send(bytes);

    schedule(config_.check_timeout, check.generation);
    pending_.emplace(ip, check);
}

void CentralServer::on_check_reply(PendingCheck& check) {
    check.reply_seen = true;
    note(CentralEvent::CheckKept, check.ip, check.old_mac);
    const auto ip = check.ip;
    const auto initiator = check.initiator_mac;
    closed_[ip] = ClosedCheck{check.old_mac, now()};
    pending_.erase(ip);
    send_signed(initiator, wire::ArpNoChange{ip});
}

void CentralServer::commit(PendingCheck& check) {
    table_[check.ip] = check.new_mac;
    note(CentralEvent::CheckCommitted, check.ip, check.new_mac);
    const auto ip = check.ip;
    const auto initiator = check.initiator_mac;
    closed_[ip] = ClosedCheck{check.old_mac, now()};
    pending_.erase(ip);
    send_signed(initiator, wire::ArpAck{ip});
}

void CentralServer::on_timer(std::uint64_t token) {
    const auto it = std::find_if(pending_.begin(), pending_.end(),
                                 [&](const auto& kv) { return kv.second.generation == token; });
    if (it == pending_.end()) return;  // already settled by a probe reply
    if (!it->second.reply_seen) commit(it->second);
}

}  // namespace csarp::protocol
