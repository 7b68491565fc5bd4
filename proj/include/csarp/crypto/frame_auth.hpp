#pragma once

#include "csarp/crypto/keys.hpp"
#include "csarp/wire/frame.hpp"

#include <cstdint>

namespace csarp::crypto {

// Key material for one simulated subnet.
struct AuthMaterial {
    SharedKey dhcp_central_key;
    KeyPair central_keys;
    Certificate central_cert;
    TrustRoot root;

    // Everything derived deterministically from one 64-bit seed.
    static AuthMaterial derive(std::uint64_t seed);
};

// Fill in frame.auth. The covered bytes are wire::authenticated_bytes(frame).
void seal_with_tag(wire::Frame& frame, const SharedKey& key);
void seal_with_signature(wire::Frame& frame, const KeyPair& kp, const Certificate& cert);

bool check_tag(const wire::Frame& frame, const SharedKey& key);
bool check_signature(const wire::Frame& frame, const TrustRoot& root);

}  // namespace csarp::crypto
