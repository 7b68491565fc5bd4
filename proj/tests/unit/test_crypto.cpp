#include "doctest.h"

#include "csarp/crypto/frame_auth.hpp"
#include "csarp/crypto/keys.hpp"
#include "csarp/wire/hex.hpp"

#include <random>
#include <set>
#include <string_view>

using namespace csarp;
using namespace csarp::crypto;

namespace {

Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

Seed seed_from(std::uint8_t fill) {
    Seed s;
    s.fill(fill);
    return s;
}

SharedKey random_key(std::mt19937_64& rng) {
    SharedKey k;
    for (auto& b : k.bytes) b = static_cast<std::uint8_t>(rng());
    return k;
}

}  // namespace

TEST_CASE("tag_message golden vector") {
    // SHA-256 of 32 zero bytes followed by "IP_send", from Python hashlib.
    const SharedKey zero{};
    const auto tag = tag_message(zero, bytes_of("IP_send"));
    CHECK(wire::to_hex(tag) == "1da865a8f5de2f98f7bf5d9d2ce4f37448282adef0b3e90415fafc8a6d41db9c");
    CHECK(tag_message(zero, bytes_of("IP_send")) == tag);
}

TEST_CASE("distinct keys give distinct tags") {
    std::mt19937_64 rng(17);
    const auto msg = bytes_of("IP_send 10.0.0.5");
    std::set<Tag> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_key(rng);
        auto b = random_key(rng);
        if (a.bytes == b.bytes) b.bytes[0] ^= 1;
        CHECK(tag_message(a, msg) != tag_message(b, msg));
        seen.insert(tag_message(a, msg));
    }
    CHECK(seen.size() == 1000);
}

TEST_CASE("verify_tag accepts exactly the right tag") {
    std::mt19937_64 rng(19);
    const auto key = random_key(rng);
    auto msg = bytes_of("some frame bytes");
    const auto tag = tag_message(key, msg);
    CHECK(verify_tag(key, msg, tag));

    auto longer = msg;
    longer.push_back(0x00);
    CHECK_FALSE(verify_tag(key, longer, tag));

    for (std::size_t bit = 0; bit < tag.size() * 8; ++bit) {
        auto bad = tag;
        bad[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        CHECK_FALSE(verify_tag(key, msg, bad));
    }
    CHECK_FALSE(verify_tag(key, msg, std::span(tag).first(31)));
}

TEST_CASE("signatures chain through the certificate to the root") {
    const auto root_keys = KeyPair::from_seed(seed_from(1));
    const auto server_keys = KeyPair::from_seed(seed_from(2));
    const auto cert = issue_certificate(root_keys, "central", server_keys.public_key());
    const auto root = trust_root_of(root_keys);
    const auto msg = bytes_of("ARP reply");
    const auto sig = sign(server_keys, msg);

    CHECK(verify(cert, msg, sig, root));
    CHECK(verify(cert.serialize(), msg, sig, root));

    SUBCASE("wrong trust anchor") {
        const auto other_root = trust_root_of(KeyPair::from_seed(seed_from(3)));
        CHECK_FALSE(verify(cert, msg, sig, other_root));
    }
    SUBCASE("self-issued certificate") {
        const auto forged = issue_certificate(server_keys, "central", server_keys.public_key());
        CHECK_FALSE(verify(forged, msg, sig, root));
    }
    SUBCASE("certificate for a different key") {
        const auto other = KeyPair::from_seed(seed_from(4));
        const auto cert_other = issue_certificate(root_keys, "central", other.public_key());
        CHECK_FALSE(verify(cert_other, msg, sig, root));
    }
}

TEST_CASE("message substitution is rejected") {
    std::mt19937_64 rng(23);
    const auto root_keys = KeyPair::from_seed(seed_from(5));
    const auto kp = KeyPair::from_seed(seed_from(6));
    const auto cert = issue_certificate(root_keys, "central", kp.public_key());
    const auto root = trust_root_of(root_keys);
    for (int i = 0; i < 200; ++i) {
        Bytes m(1 + rng() % 64);
        for (auto& b : m) b = static_cast<std::uint8_t>(rng());
        auto other = m;
        other[rng() % other.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        const auto sig = sign(kp, m);
        CHECK(verify(cert, m, sig, root));
        CHECK_FALSE(verify(cert, other, sig, root));
    }
}

TEST_CASE("any byte flip in a serialized certificate breaks verification") {
    const auto root_keys = KeyPair::from_seed(seed_from(7));
    const auto kp = KeyPair::from_seed(seed_from(8));
    const auto root = trust_root_of(root_keys);
    const auto cert_bytes = issue_certificate(root_keys, "central", kp.public_key()).serialize();
    const auto msg = bytes_of("probe");
    const auto sig = sign(kp, msg);
    REQUIRE(verify(cert_bytes, msg, sig, root));
    for (std::size_t i = 0; i < cert_bytes.size(); ++i) {
        auto bad = cert_bytes;
        bad[i] ^= 0x01;
        CHECK_FALSE(verify(bad, msg, sig, root));
    }
}

TEST_CASE("certificate wire layout and determinism") {
    const auto root_keys = KeyPair::from_seed(seed_from(9));
    const auto kp = KeyPair::from_seed(seed_from(10));
    const auto a = issue_certificate(root_keys, "cs", kp.public_key());
    const auto b = issue_certificate(root_keys, "cs", kp.public_key());
    CHECK(a == b);
    CHECK(a.serialize() == b.serialize());

    const auto bytes = a.serialize();
    REQUIRE(bytes.size() == 2 + 2 + 2 + 32 + 64);
    CHECK(bytes[0] == 0x00);
    CHECK(bytes[1] == 0x02);
    CHECK(bytes[2] == 'c');
    CHECK(bytes[3] == 's');
    CHECK(bytes[4] == 0x00);
    CHECK(bytes[5] == 32);
    CHECK(Certificate::parse(bytes) == a);
    CHECK_FALSE(Certificate::parse(std::span(bytes).first(bytes.size() - 1)));
    CHECK_FALSE(Certificate::parse({}));
}

TEST_CASE("frame sealing covers header and body only") {
    const auto material = AuthMaterial::derive(42);
    wire::Frame f{wire::MacAddr::local(1), wire::MacAddr::local(2),
                  wire::IpSend{wire::Ipv4Addr{{10, 0, 0, 5}}, wire::MacAddr::local(10)}, wire::NoAuth{}};
    seal_with_tag(f, material.dhcp_central_key);
    CHECK(check_tag(f, material.dhcp_central_key));
    CHECK_FALSE(check_signature(f, material.root));
    auto tampered = f;
    std::get<wire::IpSend>(tampered.body).mac = wire::MacAddr::local(11);
    CHECK_FALSE(check_tag(tampered, material.dhcp_central_key));

    wire::Frame g{wire::MacAddr::local(10), wire::MacAddr::local(1), wire::ArpAck{wire::Ipv4Addr{{10, 0, 0, 5}}},
                  wire::NoAuth{}};
    seal_with_signature(g, material.central_keys, material.central_cert);
    CHECK(check_signature(g, material.root));
    CHECK_FALSE(check_signature(g, AuthMaterial::derive(43).root));
    auto redirected = g;
    redirected.dest = wire::MacAddr::local(12);
    CHECK_FALSE(check_signature(redirected, material.root));

    // Same seed, same material.
    const auto again = AuthMaterial::derive(42);
    CHECK(again.central_cert == material.central_cert);
    CHECK(again.dhcp_central_key.bytes == material.dhcp_central_key.bytes);
}
