#include "csarp/protocol/attacker.hpp"

namespace csarp::protocol {

Attacker::Attacker(Mode mode, std::optional<wire::MacAddr> central_mac) : mode_(mode), central_mac_(central_mac) {}

void Attacker::spoof(wire::Ipv4Addr ip) {
    const bool to_central = mode_ == Mode::Secure && central_mac_;
    const auto dest = to_central ? *central_mac_ : wire::MacAddr::broadcast();
    const auto target_ip = to_central ? wire::Ipv4Addr{} : ip;
    wire::Frame forged{dest, mac(), wire::StdArp{wire::ArpOp::Reply, mac(), ip, dest, target_ip}, wire::NoAuth{}};
    ++forged_sent_;
    send(wire::encode_frame(forged));
}

void Attacker::launch(const AttackerStrategy& strategy) {
    if (const auto* s = std::get_if<SpoofMapping>(&strategy)) {
        spoof(s->victim_ip);
    } else if (const auto* r = std::get_if<RaceOldMac>(&strategy)) {
        sim().rebind_mac(id(), r->victim_old_mac);
        race_ = *r;
    } else if (const auto* f = std::get_if<DosFloodCentral>(&strategy)) {
        flood_ = *f;
        flood_started_ = now();
        flood_once();
    } else if (const auto* d = std::get_if<DosVictim>(&strategy)) {
        auto policy = sim().policy_for(d->victim);
        policy.p_drop = 1.0 - d->delivery_probability;
        sim().set_policy(d->victim, policy);
        spoof(d->victim_ip);
    }
}

void Attacker::flood_once() {
    auto& rng = sim().rng();
    wire::MacAddr fake{{0x06, 0, 0, 0, 0, 0}};
    for (std::size_t i = 1; i < 6; ++i) fake.octets[i] = static_cast<std::uint8_t>(rng() & 0xFF);
    const auto dest = mode_ == Mode::Secure && central_mac_ ? *central_mac_ : wire::MacAddr::broadcast();
    wire::Frame forged{dest, fake, wire::StdArp{wire::ArpOp::Reply, fake, flood_->claimed_ip, dest, wire::Ipv4Addr{}},
                       wire::NoAuth{}};
    ++forged_sent_;
    send(wire::encode_frame(forged));

    const auto next = now() + flood_->interval;
    if (flood_->duration == 0 || next < flood_started_ + flood_->duration) schedule(flood_->interval, 0);
}

void Attacker::on_timer(std::uint64_t) {
    if (flood_) flood_once();
}

void Attacker::on_frame(std::span<const std::uint8_t> bytes) {
    if (!race_) return;
    wire::Frame frame;
    try {
        frame = wire::decode_frame(bytes);
    } catch (const wire::DecodeError&) {
        return;
    }
    const auto* check = std::get_if<wire::ArpCheck>(&frame.body);
    if (!check || frame.dest != mac() || check->ip != race_->victim_ip) return;
    // Pose as the victim's old interface: "still here".
    wire::Frame answer{frame.src, mac(), wire::StdArp{wire::ArpOp::Reply, mac(), race_->victim_ip, frame.src, {}},
                       wire::NoAuth{}};
    ++probes_answered_;
    send(wire::encode_frame(answer));
}

}  // namespace csarp::protocol
