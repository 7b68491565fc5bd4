#pragma once

#include "csarp/wire/frame.hpp"

#include <random>

namespace csarp::test {

inline wire::MacAddr random_mac(std::mt19937_64& rng) {
    wire::MacAddr m;
    for (auto& o : m.octets) o = static_cast<std::uint8_t>(rng());
    return m;
}

inline wire::Ipv4Addr random_ip(std::mt19937_64& rng) {
    return wire::Ipv4Addr::from_u32(static_cast<std::uint32_t>(rng()));
}

inline wire::StdArp random_arp(std::mt19937_64& rng) {
    return wire::StdArp{(rng() & 1) ? wire::ArpOp::Request : wire::ArpOp::Reply, random_mac(rng), random_ip(rng),
                        random_mac(rng), random_ip(rng)};
}

inline wire::AuthSection random_auth_for(const wire::Body& body, std::mt19937_64& rng) {
    switch (wire::required_auth_kind(body)) {
        case wire::AuthKind::None: return wire::NoAuth{};
        case wire::AuthKind::KeyedTag: {
            wire::KeyedTag t;
            for (auto& b : t.tag) b = static_cast<std::uint8_t>(rng());
            return t;
        }
        case wire::AuthKind::Signature: {
            wire::SignatureAuth s;
            for (auto& b : s.signature) b = static_cast<std::uint8_t>(rng());
            s.cert.resize(rng() % 200);
            for (auto& b : s.cert) b = static_cast<std::uint8_t>(rng());
            return s;
        }
    }
    return wire::NoAuth{};
}

// kind is the Body variant index.
inline wire::Frame random_frame(std::size_t kind, std::mt19937_64& rng) {
    wire::Body body;
    switch (kind) {
        case 0: body = wire::IpSend{random_ip(rng), random_mac(rng)}; break;
        case 1: body = wire::IpReply{random_ip(rng), random_mac(rng), (rng() & 1) != 0}; break;
        case 2: body = wire::ArpCheck{random_ip(rng)}; break;
        case 3: body = wire::ArpNoChange{random_ip(rng)}; break;
        case 4: body = wire::ArpAck{random_ip(rng)}; break;
        case 5: body = random_arp(rng); break;
        default: body = wire::SignedArpReply{random_arp(rng)}; break;
    }
    auto auth = random_auth_for(body, rng);
    return wire::Frame{random_mac(rng), random_mac(rng), std::move(body), std::move(auth)};
}

inline constexpr std::size_t kFrameKinds = std::variant_size_v<wire::Body>;

}  // namespace csarp::test
