#pragma once

#include "csarp/protocol/config.hpp"
#include "csarp/simnet/simulation.hpp"
#include "csarp/wire/frame.hpp"

#include <optional>
#include <variant>

namespace csarp::protocol {

// One forged ARP reply claiming victim_ip for the attacker's own MAC.
struct SpoofMapping {
    wire::Ipv4Addr victim_ip;
};

// Take over the victim's vacated MAC and answer the Central Server's probes with it.
struct RaceOldMac {
    wire::MacAddr victim_old_mac;
    wire::Ipv4Addr victim_ip;
};

// Forged ARP replies from random spoofed MACs, one every `interval` ticks.
// duration 0 floods forever.
struct DosFloodCentral {
    wire::Ipv4Addr claimed_ip;
    Tick interval = 1;
    Tick duration = 0;
};

// Make the victim miss frames (delivery probability p), then spoof its mapping.
struct DosVictim {
    simnet::NodeId victim{};
    wire::Ipv4Addr victim_ip;
    double delivery_probability = 0.1;
};

using AttackerStrategy = std::variant<SpoofMapping, RaceOldMac, DosFloodCentral, DosVictim>;

class Attacker : public simnet::Node {
public:
    // central_mac is where forged replies go in secure mode; baseline broadcasts them.
    Attacker(Mode mode, std::optional<wire::MacAddr> central_mac);

    void launch(const AttackerStrategy& strategy);

    std::uint32_t forged_sent() const noexcept { return forged_sent_; }
    std::uint32_t probes_answered() const noexcept { return probes_answered_; }

    void on_frame(std::span<const std::uint8_t> bytes) override;
    void on_timer(std::uint64_t token) override;

private:
    void spoof(wire::Ipv4Addr ip);
    void flood_once();

    Mode mode_;
    std::optional<wire::MacAddr> central_mac_;
    std::optional<RaceOldMac> race_;
    std::optional<DosFloodCentral> flood_;
    Tick flood_started_ = 0;
    std::uint32_t forged_sent_ = 0;
    std::uint32_t probes_answered_ = 0;
};

}  // namespace csarp::protocol
