#include "frame_desc.hpp"

#include "csarp/crypto/frame_auth.hpp"
#include "csarp/wire/hex.hpp"

namespace csarp::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw DescriptionError(what); }

const json& field(const json& d, const char* key) {
    if (!d.contains(key)) fail(std::string("missing field '") + key + "'");
    return d.at(key);
}

std::string text(const json& d, const char* key) {
    const auto& v = field(d, key);
    if (!v.is_string()) fail(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

wire::MacAddr mac(const json& d, const char* key) {
    const auto s = text(d, key);
    const auto m = wire::MacAddr::parse(s);
    if (!m) fail(std::string("field '") + key + "': '" + s + "' is not a MAC address");
    return *m;
}

wire::Ipv4Addr ip(const json& d, const char* key) {
    const auto s = text(d, key);
    const auto a = wire::Ipv4Addr::parse(s);
    if (!a) fail(std::string("field '") + key + "': '" + s + "' is not an IPv4 address");
    return *a;
}

std::vector<std::uint8_t> hex_bytes(const json& d, const char* key) {
    try {
        return wire::parse_hex(text(d, key));
    } catch (const wire::HexError&) {
        fail(std::string("field '") + key + "' is not valid hex");
    }
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed_hex(const json& d, const char* key) {
    const auto bytes = hex_bytes(d, key);
    if (bytes.size() != N) {
        fail(std::string("field '") + key + "' must be " + std::to_string(N) + " bytes, got " +
             std::to_string(bytes.size()));
    }
    std::array<std::uint8_t, N> out;
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
}

wire::StdArp std_arp(const json& d, wire::ArpOp op) {
    return wire::StdArp{op, mac(d, "sender_mac"), ip(d, "sender_ip"), mac(d, "target_mac"), ip(d, "target_ip")};
}

wire::Body body_of(const json& d, const std::string& type) {
    if (type == "IpSend") return wire::IpSend{ip(d, "ip"), mac(d, "mac")};
    if (type == "IpReply") {
        const auto& ack = field(d, "ack");
        if (!ack.is_boolean()) fail("field 'ack' must be true or false");
        return wire::IpReply{ip(d, "ip"), mac(d, "mac"), ack.get<bool>()};
    }
    if (type == "ArpCheck") return wire::ArpCheck{ip(d, "ip")};
    if (type == "ArpNoChange") return wire::ArpNoChange{ip(d, "ip")};
    if (type == "ArpAck") return wire::ArpAck{ip(d, "ip")};
    if (type == "ArpRequest") return std_arp(d, wire::ArpOp::Request);
    if (type == "ArpReply") return std_arp(d, wire::ArpOp::Reply);
    if (type == "SignedArpReply") return wire::SignedArpReply{std_arp(d, wire::ArpOp::Reply)};
    fail("unknown frame type '" + type + "'");
}

void apply_auth(wire::Frame& f, const json& d, std::uint64_t demo_seed) {
    const auto kind = wire::required_auth_kind(f.body);
    const json auth = d.contains("auth") ? d.at("auth") : json("none");

    if (auth.is_string()) {
        const auto mode = auth.get<std::string>();
        if (mode == "none") {
            if (kind != wire::AuthKind::None) fail("this frame type needs an auth section");
            return;
        }
        if (mode != "demo") fail("auth must be \"none\", \"demo\" or an object");
        if (kind == wire::AuthKind::None) return;
        const auto material = crypto::AuthMaterial::derive(demo_seed);
        if (kind == wire::AuthKind::KeyedTag) {
            crypto::seal_with_tag(f, material.dhcp_central_key);
        } else {
            crypto::seal_with_signature(f, material.central_keys, material.central_cert);
        }
        return;
    }
    if (!auth.is_object()) fail("auth must be \"none\", \"demo\" or an object");
    if (kind == wire::AuthKind::None) fail("this frame type carries no auth section");

    if (kind == wire::AuthKind::KeyedTag) {
        if (auth.contains("tag_key")) {
            crypto::seal_with_tag(f, crypto::SharedKey{fixed_hex<crypto::kKeyLen>(auth, "tag_key")});
        } else if (auth.contains("tag")) {
            f.auth = wire::KeyedTag{fixed_hex<wire::kTagLen>(auth, "tag")};
        } else {
            fail("tag auth needs 'tag_key' or 'tag'");
        }
        return;
    }
    if (auth.contains("sign_seed")) {
        const auto signer = crypto::KeyPair::from_seed(fixed_hex<crypto::kSeedLen>(auth, "sign_seed"));
        const auto root = crypto::KeyPair::from_seed(fixed_hex<crypto::kSeedLen>(auth, "root_seed"));
        const auto subject = auth.contains("subject") ? text(auth, "subject") : std::string("central-server");
        crypto::seal_with_signature(f, signer, crypto::issue_certificate(root, subject, signer.public_key()));
    } else if (auth.contains("signature")) {
        auto cert = hex_bytes(auth, "cert");
        if (cert.size() > wire::kMaxCertLen) fail("field 'cert' is too long");
        f.auth = wire::SignatureAuth{fixed_hex<wire::kSignatureLen>(auth, "signature"), std::move(cert)};
    } else {
        fail("signature auth needs 'sign_seed' and 'root_seed', or 'signature' and 'cert'");
    }
}

}  // namespace

const std::vector<std::string>& description_types() {
    static const std::vector<std::string> types{"IpSend",  "IpReply",    "ArpCheck", "ArpNoChange",
                                                "ArpAck",  "ArpRequest", "ArpReply", "SignedArpReply"};
    return types;
}

wire::Frame frame_from_description(const json& desc, std::uint64_t demo_seed) {
    if (!desc.is_object()) fail("description must be a JSON object");
    wire::Frame f;
    f.body = body_of(desc, text(desc, "type"));
    f.dest = mac(desc, "dest");
    f.src = mac(desc, "src");
    apply_auth(f, desc, demo_seed);
    return f;
}

json sample_description(std::string_view type) {
    const std::string central = wire::MacAddr::local(0x01).to_string();
    const std::string dhcp = wire::MacAddr::local(0x02).to_string();
    const std::string host = wire::MacAddr::local(0x0A).to_string();
    const std::string host_ip = "10.0.0.10";
    json d{{"type", std::string(type)}};
    if (type == "IpSend") {
        d.update({{"dest", central}, {"src", dhcp}, {"ip", host_ip}, {"mac", host}, {"auth", "demo"}});
    } else if (type == "IpReply") {
        d.update({{"dest", dhcp}, {"src", central}, {"ip", host_ip}, {"mac", host}, {"ack", true}, {"auth", "demo"}});
    } else if (type == "ArpCheck" || type == "ArpNoChange" || type == "ArpAck") {
        d.update({{"dest", host}, {"src", central}, {"ip", host_ip}, {"auth", "demo"}});
    } else if (type == "ArpRequest") {
        d.update({{"dest", "ff:ff:ff:ff:ff:ff"}, {"src", host}, {"sender_mac", host}, {"sender_ip", host_ip},
                  {"target_mac", "00:00:00:00:00:00"}, {"target_ip", "10.0.0.11"}, {"auth", "none"}});
    } else if (type == "ArpReply") {
        d.update({{"dest", central}, {"src", host}, {"sender_mac", host}, {"sender_ip", host_ip},
                  {"target_mac", central}, {"target_ip", "0.0.0.0"}, {"auth", "none"}});
    } else if (type == "SignedArpReply") {
        d.update({{"dest", host}, {"src", central}, {"sender_mac", wire::MacAddr::local(0x0B).to_string()},
                  {"sender_ip", "10.0.0.11"}, {"target_mac", host}, {"target_ip", host_ip}, {"auth", "demo"}});
    } else {
        fail("unknown frame type '" + std::string(type) + "'");
    }
    return d;
}

}  // namespace csarp::cli
