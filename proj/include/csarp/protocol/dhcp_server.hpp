#pragma once

#include "csarp/crypto/keys.hpp"
#include "csarp/protocol/config.hpp"
#include "csarp/simnet/simulation.hpp"
#include "csarp/wire/dhcp_lite.hpp"

#include <map>
#include <optional>

namespace csarp::protocol {

struct Lease {
    wire::MacAddr mac;
    Tick granted = 0;
    Tick renewed = 0;
};

// Leases addresses from a contiguous pool. In secure mode every new lease is
// reported to the Central Server with a tagged IP_send, retransmitted until a
// tagged IP_reply acknowledges it.
class DhcpServer : public simnet::Node {
public:
    DhcpServer(Mode mode, DhcpConfig config, wire::MacAddr central_mac, crypto::SharedKey key);

    const std::map<wire::Ipv4Addr, Lease>& leases() const noexcept { return leases_; }
    // Refreshes the client's lease timestamp. No frames, no table change.
    bool renew(const wire::MacAddr& client);

    std::size_t unacked() const noexcept { return unacked_.size(); }
    std::uint32_t ip_send_transmissions() const noexcept { return ip_send_tx_; }
    std::uint32_t pool_exhausted() const noexcept { return exhausted_; }
    std::uint32_t rejected_replies() const noexcept { return rejected_replies_; }

    void on_frame(std::span<const std::uint8_t> bytes) override;
    void on_timer(std::uint64_t token) override;

private:
    struct Unacked {
        wire::MacAddr mac;
        std::uint32_t attempts = 0;
        std::uint64_t generation = 0;
    };

    std::optional<wire::Ipv4Addr> pick_address(const wire::MacAddr& client) const;
    void on_dhcp(const wire::DhcpFrame& frame);
    void transmit_ip_send(wire::Ipv4Addr ip, Unacked& entry);

    Mode mode_;
    DhcpConfig config_;
    wire::MacAddr central_mac_;
    crypto::SharedKey key_;
    std::map<wire::Ipv4Addr, Lease> leases_;
    std::map<wire::Ipv4Addr, wire::MacAddr> offers_;
    std::map<wire::Ipv4Addr, Unacked> unacked_;
    std::uint64_t next_generation_ = 1;
    std::uint32_t ip_send_tx_ = 0;
    std::uint32_t exhausted_ = 0;
    std::uint32_t rejected_replies_ = 0;
};

}  // namespace csarp::protocol
