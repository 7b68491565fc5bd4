#pragma once

#include "csarp/crypto/keys.hpp"
#include "csarp/protocol/config.hpp"
#include "csarp/simnet/simulation.hpp"
#include "csarp/wire/frame.hpp"

#include <map>
#include <vector>

namespace csarp::protocol {

// Authoritative IP -> MAC bindings for the subnet.
using IpMacTable = std::map<wire::Ipv4Addr, wire::MacAddr>;

struct PendingCheck {
    wire::Ipv4Addr ip;
    wire::MacAddr old_mac;
    wire::MacAddr new_mac;
    wire::MacAddr initiator_mac;
    std::uint32_t probes_sent = 0;
    bool reply_seen = false;
    Tick deadline = 0;
    std::uint64_t generation = 0;
};

enum class CentralEvent {
    TableInstalled,
    BadTag,
    BadFrame,
    RateLimited,
    UnknownIp,
    AlreadyCurrent,
    DuplicatePending,
    CheckStarted,
    CheckKept,
    CheckCommitted,
    LateCheckReply,
    ResolveAnswered,
    ResolveMiss,
};

const char* to_string(CentralEvent event) noexcept;

struct CentralLogEntry {
    Tick time;
    CentralEvent event;
    wire::Ipv4Addr ip;
    wire::MacAddr mac;
};

// Token bucket in integer arithmetic: `limit` admissions per `window` ticks,
// refilled continuously, starting full.
class RateLimiter {
public:
    RateLimiter(std::uint32_t limit, Tick window);
    bool admit(Tick now);

private:
    std::uint64_t limit_;
    std::uint64_t window_;
    std::uint64_t credit_;  // in units of 1/window of a token
    Tick last_ = 0;
};

class CentralServer : public simnet::Node {
public:
    CentralServer(CentralConfig config, crypto::SharedKey dhcp_key, crypto::KeyPair keys, crypto::Certificate cert);

    const IpMacTable& table() const noexcept { return table_; }
    const std::map<wire::Ipv4Addr, PendingCheck>& pending() const noexcept { return pending_; }
    const std::vector<CentralLogEntry>& log() const noexcept { return log_; }
    std::size_t count(CentralEvent event) const;

    void on_frame(std::span<const std::uint8_t> bytes) override;
    void on_timer(std::uint64_t token) override;

private:
    struct ClosedCheck {
        wire::MacAddr old_mac;
        Tick closed_at;
    };

    void on_ip_send(const wire::Frame& frame);
    void on_arp_request(const wire::Frame& frame, const wire::StdArp& arp);
    void on_arp_reply(const wire::Frame& frame, const wire::StdArp& arp);
    void on_check_reply(PendingCheck& check);
    void commit(PendingCheck& check);
    void send_signed(wire::MacAddr dest, wire::Body body);
    void note(CentralEvent event, wire::Ipv4Addr ip, wire::MacAddr mac);

    CentralConfig config_;
    crypto::SharedKey dhcp_key_;
    crypto::KeyPair keys_;
    std::vector<std::uint8_t> cert_bytes_;
    crypto::Certificate cert_;
    RateLimiter limiter_;
    IpMacTable table_;
    std::map<wire::Ipv4Addr, PendingCheck> pending_;
    std::map<wire::Ipv4Addr, ClosedCheck> closed_;
    std::vector<CentralLogEntry> log_;
    std::uint64_t next_generation_ = 1;
};

}  // namespace csarp::protocol
