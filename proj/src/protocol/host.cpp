#include "csarp/protocol/host.hpp"

#include <algorithm>

namespace csarp::protocol {

namespace {

enum class TimerKind : std::uint64_t { Join = 1, Resolve = 2, ChangeRetry = 3 };

constexpr std::uint64_t make_token(TimerKind kind, std::uint64_t value) {
    return (static_cast<std::uint64_t>(kind) << 56) | (value & 0x00FF'FFFF'FFFF'FFFFull);
}
constexpr TimerKind token_kind(std::uint64_t token) { return static_cast<TimerKind>(token >> 56); }
constexpr std::uint64_t token_value(std::uint64_t token) { return token & 0x00FF'FFFF'FFFF'FFFFull; }

constexpr wire::Ipv4Addr kUnspecified{};

}  // namespace

const char* to_string(ResolveStatus status) noexcept {
    switch (status) {
        case ResolveStatus::Pending: return "pending";
        case ResolveStatus::Resolved: return "resolved";
        case ResolveStatus::TimedOut: return "timeout";
        case ResolveStatus::NoAddress: return "no-address";
    }
    return "?";
}

const char* to_string(ChangeOutcome outcome) noexcept {
    switch (outcome) {
        case ChangeOutcome::None: return "none";
        case ChangeOutcome::Pending: return "pending";
        case ChangeOutcome::Acked: return "acked";
        case ChangeOutcome::Rejected: return "rejected";
        case ChangeOutcome::GaveUp: return "gave-up";
    }
    return "?";
}

Host::Host(Mode mode, HostConfig config, crypto::TrustRoot root)
    : mode_(mode), config_(config), root_(std::move(root)) {}

void Host::on_attached() { held_macs_.insert(mac()); }

void Host::start_join() {
    if (joining_) return;
    joining_ = true;
    join_failed_ = false;
    ip_.reset();
    ++xid_;
    wire::DhcpMessage discover{wire::DhcpOp::Discover, xid_, mac(), {}, {}, {}};
    send(wire::encode_dhcp({wire::MacAddr::broadcast(), mac(), discover}));
    schedule(config_.join_timeout, make_token(TimerKind::Join, xid_));
}

void Host::resolve(wire::Ipv4Addr target) {
    Resolution r;
    r.target = target;
    r.started = now();
    if (!ip_) {
        r.status = ResolveStatus::NoAddress;
        r.finished = now();
        resolutions_.push_back(r);
        return;
    }
    resolutions_.push_back(r);
    wire::Frame req{wire::MacAddr::broadcast(), mac(),
                    wire::StdArp{wire::ArpOp::Request, mac(), *ip_, wire::MacAddr{}, target}, wire::NoAuth{}};
    send(wire::encode_frame(req));
    schedule(config_.resolve_timeout, make_token(TimerKind::Resolve, resolutions_.size() - 1));
}

void Host::change_mac(wire::MacAddr new_mac) {
    sim().rebind_mac(id(), new_mac);
    held_macs_.insert(new_mac);
    if (!ip_) return;

    if (mode_ == Mode::Baseline) {
        // Gratuitous ARP: one broadcast reply announcing the new binding.
        wire::Frame grat{wire::MacAddr::broadcast(), new_mac,
                         wire::StdArp{wire::ArpOp::Reply, new_mac, *ip_, wire::MacAddr::broadcast(), *ip_},
                         wire::NoAuth{}};
        send(wire::encode_frame(grat));
        return;
    }
    if (!central_mac_) return;
    change_ = PendingChange{*ip_, 0, next_generation_++};
    change_outcome_ = ChangeOutcome::Pending;
    send_change_request();
}

void Host::send_change_request() {
    ++change_->attempts;
    ++change_attempts_;
    wire::Frame req{*central_mac_, mac(),
                    wire::StdArp{wire::ArpOp::Reply, mac(), change_->ip, *central_mac_, kUnspecified},
                    wire::NoAuth{}};
    send(wire::encode_frame(req));
    schedule(config_.change_retry_timeout, make_token(TimerKind::ChangeRetry, change_->generation));
}

void Host::on_timer(std::uint64_t token) {
    const auto value = token_value(token);
    switch (token_kind(token)) {
        case TimerKind::Join:
            if (joining_ && value == xid_) {
                joining_ = false;
                join_failed_ = true;
            }
            break;
        case TimerKind::Resolve:
            if (value < resolutions_.size() && resolutions_[value].status == ResolveStatus::Pending) {
                resolutions_[value].status = ResolveStatus::TimedOut;
                resolutions_[value].finished = now();
            }
            break;
        case TimerKind::ChangeRetry:
            if (!change_ || change_->generation != value) break;
            if (config_.max_change_retries && change_->attempts > *config_.max_change_retries) {
                change_.reset();
                change_outcome_ = ChangeOutcome::GaveUp;
            } else {
                send_change_request();
            }
            break;
    }
}

void Host::on_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < wire::kMacHeaderLen) return;
    wire::MacAddr dest;
    wire::peek_dest(bytes, dest);
    if (dest != mac() && !dest.is_broadcast()) return;  // in flight across a MAC change

    const auto ether_type = static_cast<std::uint16_t>((bytes[12] << 8) | bytes[13]);
    try {
        if (ether_type == wire::kEtherTypeDhcpLite) {
            on_dhcp(wire::decode_dhcp(bytes));
            return;
        }
        const auto frame = wire::decode_frame(bytes);
        if (const auto* arp = std::get_if<wire::StdArp>(&frame.body)) {
            on_std_arp(frame, *arp);
        } else {
            on_signed(frame, bytes);
        }
    } catch (const wire::DecodeError&) {
        ++rejected_;
    }
}

void Host::on_dhcp(const wire::DhcpFrame& frame) {
    const auto& msg = frame.msg;
    if (!joining_ || msg.xid != xid_ || msg.client_mac != mac()) return;
    if (msg.op == wire::DhcpOp::Offer) {
        wire::DhcpMessage request{wire::DhcpOp::Request, xid_, mac(), msg.your_ip, msg.server_mac, {}};
        send(wire::encode_dhcp({wire::MacAddr::broadcast(), mac(), request}));
    } else if (msg.op == wire::DhcpOp::Ack) {
        joining_ = false;
        ip_ = msg.your_ip;
        held_ips_.insert(msg.your_ip);
        if (msg.central_mac != wire::MacAddr{}) central_mac_ = msg.central_mac;
        ++joins_completed_;
    }
}

void Host::complete_resolution(wire::Ipv4Addr ip, wire::MacAddr mac_addr) {
    for (auto& r : resolutions_) {
        if (r.status == ResolveStatus::Pending && r.target == ip) {
            r.status = ResolveStatus::Resolved;
            r.mac = mac_addr;
            r.finished = now();
        }
    }
}

void Host::on_std_arp(const wire::Frame& frame, const wire::StdArp& arp) {
    if (mode_ == Mode::Secure) {
        // Only the Central Server answers requests, and only signed replies count.
        ++ignored_unsigned_;
        return;
    }
    if (arp.op == wire::ArpOp::Request) {
        if (ip_ && arp.target_ip == *ip_) {
            wire::Frame reply{frame.src, mac(),
                              wire::StdArp{wire::ArpOp::Reply, mac(), *ip_, arp.sender_mac, arp.sender_ip},
                              wire::NoAuth{}};
            send(wire::encode_frame(reply));
        }
        return;
    }
    // Textbook ARP believes every reply, solicited or not.
    if (ip_ && arp.sender_ip == *ip_) return;
    cache_[arp.sender_ip] = arp.sender_mac;
    complete_resolution(arp.sender_ip, arp.sender_mac);
}

bool Host::authentic(const wire::Frame& frame, std::span<const std::uint8_t> bytes) {
    if (mode_ != Mode::Secure) return false;
    if (std::equal(bytes.begin(), bytes.end(), last_verified_.begin(), last_verified_.end())) return true;
    const auto* sig = std::get_if<wire::SignatureAuth>(&frame.auth);
    if (!sig) return false;

    auto trusted = trusted_certs_.find(sig->cert);
    if (trusted == trusted_certs_.end()) {
        const auto cert = crypto::Certificate::parse(sig->cert);
        if (!cert || !crypto::verify_certificate(*cert, root_)) return false;
        trusted = trusted_certs_.emplace(sig->cert, cert->subject_public_key).first;
    }
    if (!crypto::verify_signature(trusted->second, wire::authenticated_bytes(frame), sig->signature)) return false;
    last_verified_.assign(bytes.begin(), bytes.end());
    return true;
}

void Host::on_signed(const wire::Frame& frame, std::span<const std::uint8_t> bytes) {
    const bool addressed = frame.dest == mac();
    if (std::holds_alternative<wire::IpSend>(frame.body) || std::holds_alternative<wire::IpReply>(frame.body)) {
        return;
    }
    if (!addressed) return;
    if (!authentic(frame, bytes)) {
        ++rejected_;
        return;
    }

    if (const auto* reply = std::get_if<wire::SignedArpReply>(&frame.body)) {
        const auto& arp = reply->inner;
        if (arp.op != wire::ArpOp::Reply || arp.target_mac != mac()) return;
        const bool asked = std::any_of(resolutions_.begin(), resolutions_.end(), [&](const Resolution& r) {
            return r.status == ResolveStatus::Pending && r.target == arp.sender_ip;
        });
        if (!asked) return;
        cache_[arp.sender_ip] = arp.sender_mac;
        complete_resolution(arp.sender_ip, arp.sender_mac);
    } else if (const auto* check = std::get_if<wire::ArpCheck>(&frame.body)) {
        // Still alive at this MAC with this address: say so.
        if (!ip_ || check->ip != *ip_) return;
        wire::Frame answer{frame.src, mac(), wire::StdArp{wire::ArpOp::Reply, mac(), *ip_, frame.src, kUnspecified},
                           wire::NoAuth{}};
        send(wire::encode_frame(answer));
    } else if (const auto* ack = std::get_if<wire::ArpAck>(&frame.body)) {
        if (!change_ || change_->ip != ack->ip) return;
        change_.reset();
        change_outcome_ = ChangeOutcome::Acked;
    } else if (const auto* nochange = std::get_if<wire::ArpNoChange>(&frame.body)) {
        if (!change_ || change_->ip != nochange->ip) return;
        change_.reset();
        change_outcome_ = ChangeOutcome::Rejected;
        saw_no_change_ = true;
        // The old binding stands; get a fresh address under the new MAC.
        start_join();
    }
}

}  // namespace csarp::protocol
