#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace csarp::crypto {

inline constexpr std::size_t kKeyLen = 32;
inline constexpr std::size_t kTagLen = 32;
inline constexpr std::size_t kSignatureLen = 64;
inline constexpr std::size_t kSeedLen = 32;

using Bytes = std::vector<std::uint8_t>;
using Tag = std::array<std::uint8_t, kTagLen>;
using Signature = std::array<std::uint8_t, kSignatureLen>;
using Seed = std::array<std::uint8_t, kSeedLen>;

// Symmetric key shared by the DHCP server and the Central Server. Never put on the wire.
struct SharedKey {
    std::array<std::uint8_t, kKeyLen> bytes{};
};

// Ed25519 key pair. Signing is deterministic, so identical inputs give identical signatures.
class KeyPair {
public:
    static KeyPair from_seed(const Seed& seed);

    const Bytes& public_key() const noexcept { return public_; }

private:
    friend Signature sign(const KeyPair& kp, std::span<const std::uint8_t> msg);
    Bytes public_;
    std::array<std::uint8_t, 64> secret_{};
};

struct TrustRoot {
    Bytes public_key;
};

// Wire form: subject_len(2, BE) | subject | key_len(2, BE) | key | issuer_signature(64).
struct Certificate {
    std::string subject;
    Bytes subject_public_key;
    Signature issuer_signature{};

    Bytes serialize() const;
    // The bytes the issuer signs: the serialized form without the trailing signature.
    Bytes signed_portion() const;
    static std::optional<Certificate> parse(std::span<const std::uint8_t> bytes);

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

// SHA-256(key || msg).
Tag tag_message(const SharedKey& key, std::span<const std::uint8_t> msg);
bool verify_tag(const SharedKey& key, std::span<const std::uint8_t> msg, std::span<const std::uint8_t> tag);

Signature sign(const KeyPair& kp, std::span<const std::uint8_t> msg);

// True iff cert chains to root and sig validates msg under the certified key.
bool verify(const Certificate& cert, std::span<const std::uint8_t> msg, std::span<const std::uint8_t> sig,
            const TrustRoot& root);
bool verify(std::span<const std::uint8_t> cert_bytes, std::span<const std::uint8_t> msg,
            std::span<const std::uint8_t> sig, const TrustRoot& root);

bool verify_certificate(const Certificate& cert, const TrustRoot& root);
bool verify_signature(std::span<const std::uint8_t> public_key, std::span<const std::uint8_t> msg,
                      std::span<const std::uint8_t> sig);

Certificate issue_certificate(const KeyPair& root_keypair, std::string subject, Bytes subject_public_key);

TrustRoot trust_root_of(const KeyPair& root_keypair);

}  // namespace csarp::crypto
