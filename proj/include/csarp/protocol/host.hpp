#pragma once

#include "csarp/crypto/keys.hpp"
#include "csarp/protocol/config.hpp"
#include "csarp/simnet/simulation.hpp"
#include "csarp/wire/dhcp_lite.hpp"
#include "csarp/wire/frame.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace csarp::protocol {

enum class ResolveStatus { Pending, Resolved, TimedOut, NoAddress };
enum class ChangeOutcome { None, Pending, Acked, Rejected, GaveUp };

const char* to_string(ResolveStatus status) noexcept;
const char* to_string(ChangeOutcome outcome) noexcept;

struct Resolution {
    wire::Ipv4Addr target;
    ResolveStatus status = ResolveStatus::Pending;
    std::optional<wire::MacAddr> mac;
    Tick started = 0;
    Tick finished = 0;
};

// An end host. In secure mode it trusts only Central Server frames whose
// certificate chains to the trust root; in baseline mode it is a textbook
// ARP speaker that believes any reply.
class Host : public simnet::Node {
public:
    Host(Mode mode, HostConfig config, crypto::TrustRoot root);

    void start_join();
    void resolve(wire::Ipv4Addr target);
    void change_mac(wire::MacAddr new_mac);

    std::optional<wire::Ipv4Addr> ip() const noexcept { return ip_; }
    std::optional<wire::MacAddr> central_mac() const noexcept { return central_mac_; }
    const std::map<wire::Ipv4Addr, wire::MacAddr>& arp_cache() const noexcept { return cache_; }
    const std::vector<Resolution>& resolutions() const noexcept { return resolutions_; }

    bool joining() const noexcept { return joining_; }
    bool join_failed() const noexcept { return join_failed_; }
    std::uint32_t joins_completed() const noexcept { return joins_completed_; }

    ChangeOutcome change_outcome() const noexcept { return change_outcome_; }
    std::uint32_t change_attempts() const noexcept { return change_attempts_; }
    bool saw_no_change() const noexcept { return saw_no_change_; }

    // Every address and MAC this host has legitimately held.
    const std::set<wire::Ipv4Addr>& held_ips() const noexcept { return held_ips_; }
    const std::set<wire::MacAddr>& held_macs() const noexcept { return held_macs_; }

    // Signed frames that failed verification, and unsigned ARP ignored in secure mode.
    std::uint32_t rejected_frames() const noexcept { return rejected_; }
    std::uint32_t ignored_unsigned() const noexcept { return ignored_unsigned_; }

    void on_attached() override;
    void on_frame(std::span<const std::uint8_t> bytes) override;
    void on_timer(std::uint64_t token) override;

private:
    struct PendingChange {
        wire::Ipv4Addr ip;
        std::uint32_t attempts = 0;
        std::uint64_t generation = 0;
    };

    void on_dhcp(const wire::DhcpFrame& frame);
    void on_std_arp(const wire::Frame& frame, const wire::StdArp& arp);
    void on_signed(const wire::Frame& frame, std::span<const std::uint8_t> bytes);
    bool authentic(const wire::Frame& frame, std::span<const std::uint8_t> bytes);
    void complete_resolution(wire::Ipv4Addr ip, wire::MacAddr mac);
    void send_change_request();

    Mode mode_;
    HostConfig config_;
    crypto::TrustRoot root_;

    std::optional<wire::Ipv4Addr> ip_;
    std::optional<wire::MacAddr> central_mac_;
    std::map<wire::Ipv4Addr, wire::MacAddr> cache_;
    std::vector<Resolution> resolutions_;

    std::uint32_t xid_ = 0;
    bool joining_ = false;
    bool join_failed_ = false;
    std::uint32_t joins_completed_ = 0;

    std::optional<PendingChange> change_;
    std::uint64_t next_generation_ = 1;
    ChangeOutcome change_outcome_ = ChangeOutcome::None;
    std::uint32_t change_attempts_ = 0;
    bool saw_no_change_ = false;

    std::set<wire::Ipv4Addr> held_ips_;
    std::set<wire::MacAddr> held_macs_;
    std::uint32_t rejected_ = 0;
    std::uint32_t ignored_unsigned_ = 0;

    // Certificates already chained to the root, keyed by their wire bytes.
    std::map<std::vector<std::uint8_t>, std::vector<std::uint8_t>> trusted_certs_;
    std::vector<std::uint8_t> last_verified_;
};

}  // namespace csarp::protocol
