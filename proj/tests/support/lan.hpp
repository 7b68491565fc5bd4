#pragma once

#include "csarp/crypto/frame_auth.hpp"
#include "csarp/protocol/attacker.hpp"
#include "csarp/protocol/central_server.hpp"
#include "csarp/protocol/dhcp_server.hpp"
#include "csarp/protocol/host.hpp"
#include "csarp/simnet/simulation.hpp"
#include "csarp/wire/dhcp_lite.hpp"

#include <functional>
#include <vector>

namespace csarp::test {

// Sends whatever bytes it is handed. Stands in for an arbitrary rogue station.
class Injector : public simnet::Node {
public:
    // Records only frames addressed to this station.
    void on_frame(std::span<const std::uint8_t> bytes) override {
        wire::MacAddr dest;
        if (wire::peek_dest(bytes, dest) && dest == mac()) received.emplace_back(bytes.begin(), bytes.end());
    }
    void emit(std::vector<std::uint8_t> bytes) { send(std::move(bytes)); }
    std::vector<std::vector<std::uint8_t>> received;
};

inline const wire::MacAddr kCentralMac = wire::MacAddr::local(0x01);
inline const wire::MacAddr kDhcpMac = wire::MacAddr::local(0x02);
inline const wire::MacAddr kAttackerMac = wire::MacAddr::local(0x66);
inline const wire::MacAddr kInjectorMac = wire::MacAddr::local(0x77);

inline wire::MacAddr host_mac(int i) { return wire::MacAddr::local(0x0A + static_cast<std::uint32_t>(i)); }

// A LAN with one DHCP server, n hosts and, in secure mode, a Central Server.
struct Lan {
    Lan(protocol::Mode mode, int n_hosts, std::uint64_t seed = 1, protocol::CentralConfig cc = {},
        protocol::HostConfig hc = {}, protocol::DhcpConfig dc = {})
        : mode(mode), sim(seed), auth(crypto::AuthMaterial::derive(seed)) {
        if (mode == protocol::Mode::Secure) {
            central = &sim.emplace_node<protocol::CentralServer>(kCentralMac, "central", cc, auth.dhcp_central_key,
                                                                  auth.central_keys, auth.central_cert);
        }
        dhcp = &sim.emplace_node<protocol::DhcpServer>(kDhcpMac, "dhcp", mode, dc, kCentralMac, auth.dhcp_central_key);
        for (int i = 0; i < n_hosts; ++i) {
            hosts.push_back(&sim.emplace_node<protocol::Host>(host_mac(i), "h" + std::to_string(i), mode, hc, auth.root));
        }
    }

    protocol::Attacker& add_attacker() {
        attacker = &sim.emplace_node<protocol::Attacker>(kAttackerMac, "attacker", mode, std::optional(kCentralMac));
        return *attacker;
    }
    Injector& add_injector() {
        injector = &sim.emplace_node<Injector>(kInjectorMac, "injector");
        return *injector;
    }

    void at(simnet::Tick t, std::function<void()> fn, simnet::EpisodeId ep = simnet::kNoEpisode) {
        sim.schedule_action(t, std::move(fn), ep);
    }

    // Joins every host, one at a time, and runs to quiescence.
    void join_all() {
        for (std::size_t i = 0; i < hosts.size(); ++i) {
            auto* h = hosts[i];
            at(sim.now() + 1 + 100 * i, [h] { h->start_join(); });
        }
        sim.run_until_quiescent(sim.now() + 100 * hosts.size() + 1000);
    }

    void run(simnet::Tick horizon = 100000) { sim.run_until_quiescent(sim.now() + horizon); }

    protocol::Mode mode;
    simnet::Simulation sim;
    crypto::AuthMaterial auth;
    protocol::CentralServer* central = nullptr;
    protocol::DhcpServer* dhcp = nullptr;
    std::vector<protocol::Host*> hosts;
    protocol::Attacker* attacker = nullptr;
    Injector* injector = nullptr;
};

}  // namespace csarp::test
