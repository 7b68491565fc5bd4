#include "csarp/crypto/keys.hpp"

#include <sodium.h>

#include <stdexcept>

namespace csarp::crypto {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("libsodium initialisation failed");
}

void put_u16(Bytes& out, std::size_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace

KeyPair KeyPair::from_seed(const Seed& seed) {
    ensure_sodium();
    KeyPair kp;
    kp.public_.resize(crypto_sign_PUBLICKEYBYTES);
    crypto_sign_seed_keypair(kp.public_.data(), kp.secret_.data(), seed.data());
    return kp;
}

Bytes Certificate::signed_portion() const {
    if (subject.size() > 0xFFFF || subject_public_key.size() > 0xFFFF) {
        throw std::length_error("certificate field too long");
    }
    Bytes out;
    out.reserve(4 + subject.size() + subject_public_key.size() + kSignatureLen);
    put_u16(out, subject.size());
    out.insert(out.end(), subject.begin(), subject.end());
    put_u16(out, subject_public_key.size());
    out.insert(out.end(), subject_public_key.begin(), subject_public_key.end());
    return out;
}

Bytes Certificate::serialize() const {
    auto out = signed_portion();
    out.insert(out.end(), issuer_signature.begin(), issuer_signature.end());
    return out;
}

std::optional<Certificate> Certificate::parse(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    auto read_len = [&]() -> std::optional<std::size_t> {
        if (bytes.size() - pos < 2) return std::nullopt;
        const std::size_t v = (std::size_t{bytes[pos]} << 8) | bytes[pos + 1];
        pos += 2;
        return v;
    };
    Certificate cert;
    const auto subject_len = read_len();
    if (!subject_len || bytes.size() - pos < *subject_len) return std::nullopt;
    cert.subject.assign(bytes.begin() + pos, bytes.begin() + pos + *subject_len);
    pos += *subject_len;
    const auto key_len = read_len();
    if (!key_len || bytes.size() - pos < *key_len) return std::nullopt;
    cert.subject_public_key.assign(bytes.begin() + pos, bytes.begin() + pos + *key_len);
    pos += *key_len;
    if (bytes.size() - pos != kSignatureLen) return std::nullopt;
    std::copy(bytes.begin() + pos, bytes.end(), cert.issuer_signature.begin());
    return cert;
}

Tag tag_message(const SharedKey& key, std::span<const std::uint8_t> msg) {
    ensure_sodium();
    crypto_hash_sha256_state st;
    crypto_hash_sha256_init(&st);
    crypto_hash_sha256_update(&st, key.bytes.data(), key.bytes.size());
    crypto_hash_sha256_update(&st, msg.data(), msg.size());
    Tag out{};
    crypto_hash_sha256_final(&st, out.data());
    return out;
}

bool verify_tag(const SharedKey& key, std::span<const std::uint8_t> msg, std::span<const std::uint8_t> tag) {
    if (tag.size() != kTagLen) return false;
    const auto expected = tag_message(key, msg);
    return sodium_memcmp(expected.data(), tag.data(), kTagLen) == 0;
}

Signature sign(const KeyPair& kp, std::span<const std::uint8_t> msg) {
    ensure_sodium();
    Signature sig{};
    crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(), kp.secret_.data());
    return sig;
}

namespace {

bool ed25519_ok(std::span<const std::uint8_t> sig, std::span<const std::uint8_t> msg,
                std::span<const std::uint8_t> public_key) {
    if (sig.size() != kSignatureLen || public_key.size() != crypto_sign_PUBLICKEYBYTES) return false;
    return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(), public_key.data()) == 0;
}

}  // namespace

bool verify_certificate(const Certificate& cert, const TrustRoot& root) {
    ensure_sodium();
    if (cert.subject.size() > 0xFFFF || cert.subject_public_key.size() > 0xFFFF) return false;
    return ed25519_ok(cert.issuer_signature, cert.signed_portion(), root.public_key);
}

bool verify_signature(std::span<const std::uint8_t> public_key, std::span<const std::uint8_t> msg,
                      std::span<const std::uint8_t> sig) {
    ensure_sodium();
    return ed25519_ok(sig, msg, public_key);
}

bool verify(const Certificate& cert, std::span<const std::uint8_t> msg, std::span<const std::uint8_t> sig,
            const TrustRoot& root) {
    return verify_certificate(cert, root) && verify_signature(cert.subject_public_key, msg, sig);
}

bool verify(std::span<const std::uint8_t> cert_bytes, std::span<const std::uint8_t> msg,
            std::span<const std::uint8_t> sig, const TrustRoot& root) {
    const auto cert = Certificate::parse(cert_bytes);
    return cert && verify(*cert, msg, sig, root);
}

Certificate issue_certificate(const KeyPair& root_keypair, std::string subject, Bytes subject_public_key) {
    Certificate cert;
    cert.subject = std::move(subject);
    cert.subject_public_key = std::move(subject_public_key);
    cert.issuer_signature = sign(root_keypair, cert.signed_portion());
    return cert;
}

TrustRoot trust_root_of(const KeyPair& root_keypair) {
    return TrustRoot{root_keypair.public_key()};
}

}  // namespace csarp::crypto
