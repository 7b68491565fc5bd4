#include "csarp/crypto/frame_auth.hpp"

#include <random>

namespace csarp::crypto {

namespace {

template <std::size_t N>
std::array<std::uint8_t, N> draw(std::mt19937_64& rng) {
    std::array<std::uint8_t, N> out{};
    for (auto& b : out) b = static_cast<std::uint8_t>(rng() & 0xFF);
    return out;
}

}  // namespace

AuthMaterial AuthMaterial::derive(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x41555448u};
    std::mt19937_64 rng(seq);
    const auto root_keys = KeyPair::from_seed(draw<kSeedLen>(rng));
    AuthMaterial m{
        SharedKey{draw<kKeyLen>(rng)},
        KeyPair::from_seed(draw<kSeedLen>(rng)),
        {},
        trust_root_of(root_keys),
    };
    m.central_cert = issue_certificate(root_keys, "central-server", m.central_keys.public_key());
    return m;
}

void seal_with_tag(wire::Frame& frame, const SharedKey& key) {
    frame.auth = wire::KeyedTag{tag_message(key, wire::authenticated_bytes(frame))};
}

void seal_with_signature(wire::Frame& frame, const KeyPair& kp, const Certificate& cert) {
    frame.auth = wire::SignatureAuth{sign(kp, wire::authenticated_bytes(frame)), cert.serialize()};
}

bool check_tag(const wire::Frame& frame, const SharedKey& key) {
    const auto* tag = std::get_if<wire::KeyedTag>(&frame.auth);
    return tag && verify_tag(key, wire::authenticated_bytes(frame), tag->tag);
}

bool check_signature(const wire::Frame& frame, const TrustRoot& root) {
    const auto* sig = std::get_if<wire::SignatureAuth>(&frame.auth);
    return sig && verify(sig->cert, wire::authenticated_bytes(frame), sig->signature, root);
}

}  // namespace csarp::crypto
