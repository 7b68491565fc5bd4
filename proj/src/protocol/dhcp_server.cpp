#include "csarp/protocol/dhcp_server.hpp"

#include "csarp/crypto/frame_auth.hpp"
#include "csarp/wire/frame.hpp"

namespace csarp::protocol {

DhcpServer::DhcpServer(Mode mode, DhcpConfig config, wire::MacAddr central_mac, crypto::SharedKey key)
    : mode_(mode), config_(config), central_mac_(central_mac), key_(key) {}

bool DhcpServer::renew(const wire::MacAddr& client) {
    for (auto& [ip, lease] : leases_) {
        if (lease.mac == client) {
            lease.renewed = now();
            return true;
        }
    }
    return false;
}

std::optional<wire::Ipv4Addr> DhcpServer::pick_address(const wire::MacAddr& client) const {
    for (const auto& [ip, lease] : leases_) {
        if (lease.mac == client) return ip;
    }
    for (const auto& [ip, mac] : offers_) {
        if (mac == client) return ip;
    }
    const auto first = config_.pool_first.to_u32();
    for (std::uint32_t i = 0; i < config_.pool_size; ++i) {
        const auto ip = wire::Ipv4Addr::from_u32(first + i);
        if (!leases_.count(ip) && !offers_.count(ip)) return ip;
    }
    return std::nullopt;
}

void DhcpServer::on_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < wire::kMacHeaderLen) return;
    const auto ether_type = static_cast<std::uint16_t>((bytes[12] << 8) | bytes[13]);
    try {
        if (ether_type == wire::kEtherTypeDhcpLite) {
            on_dhcp(wire::decode_dhcp(bytes));
            return;
        }
        if (ether_type != wire::kEtherTypeSecure || mode_ != Mode::Secure) return;
        const auto frame = wire::decode_frame(bytes);
        const auto* reply = std::get_if<wire::IpReply>(&frame.body);
        if (!reply || frame.dest != mac()) return;
        if (!crypto::check_tag(frame, key_)) {
            ++rejected_replies_;
            return;
        }
        const auto it = unacked_.find(reply->ip);
        if (reply->ack && it != unacked_.end() && it->second.mac == reply->mac) unacked_.erase(it);
    } catch (const wire::DecodeError&) {
        // corrupt frames are dropped
    }
}

void DhcpServer::on_dhcp(const wire::DhcpFrame& frame) {
    const auto& msg = frame.msg;
    if (frame.dest != mac() && !frame.dest.is_broadcast()) return;

    if (msg.op == wire::DhcpOp::Discover) {
        const auto ip = pick_address(msg.client_mac);
        if (!ip) {
            ++exhausted_;
            return;
        }
        offers_[*ip] = msg.client_mac;
        wire::DhcpMessage offer{wire::DhcpOp::Offer, msg.xid, msg.client_mac, *ip, mac(), {}};
        send(wire::encode_dhcp({msg.client_mac, mac(), offer}));
        return;
    }

    if (msg.op != wire::DhcpOp::Request || msg.server_mac != mac()) return;
    const auto ip = msg.your_ip;
    const auto offered = offers_.find(ip);
    const auto leased = leases_.find(ip);
    const bool ours = (offered != offers_.end() && offered->second == msg.client_mac) ||
                      (leased != leases_.end() && leased->second.mac == msg.client_mac);
    if (!ours) return;

    leases_[ip] = Lease{msg.client_mac, now(), now()};
    offers_.erase(ip);
    const auto central = mode_ == Mode::Secure ? central_mac_ : wire::MacAddr{};
    wire::DhcpMessage ack{wire::DhcpOp::Ack, msg.xid, msg.client_mac, ip, mac(), central};
    send(wire::encode_dhcp({msg.client_mac, mac(), ack}));

    if (mode_ == Mode::Secure) {
        auto& entry = unacked_[ip];
        entry = Unacked{msg.client_mac, 0, next_generation_++};
        transmit_ip_send(ip, entry);
    }
}

void DhcpServer::transmit_ip_send(wire::Ipv4Addr ip, Unacked& entry) {
    wire::Frame frame{central_mac_, mac(), wire::IpSend{ip, entry.mac}, wire::NoAuth{}};
    crypto::seal_with_tag(frame, key_);
    ++entry.attempts;
    ++ip_send_tx_;
    send(wire::encode_frame(frame));
    schedule(config_.ip_send_timeout, entry.generation);
}

void DhcpServer::on_timer(std::uint64_t token) {
    for (auto it = unacked_.begin(); it != unacked_.end(); ++it) {
        if (it->second.generation != token) continue;
        if (it->second.attempts > config_.ip_send_max_retries) {
            unacked_.erase(it);
        } else {
            transmit_ip_send(it->first, it->second);
        }
        return;
    }
}

}  // namespace csarp::protocol
