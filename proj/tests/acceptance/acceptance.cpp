// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "csarp/crypto/frame_auth.hpp"
#include "csarp/scenarios/builtins.hpp"
#include "csarp/scenarios/runner.hpp"
#include "csarp/wire/crc32.hpp"
#include "csarp/wire/dissect.hpp"
#include "support/lan.hpp"
#include "support/oracles.hpp"
#include "support/random_frames.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace csarp;
using scenarios::Mode;
using scenarios::Verdict;
using Bytes = std::vector<std::uint8_t>;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

scenarios::Scenario builtin(const char* name, Mode mode) {
    auto s = scenarios::find_builtin(name, mode);
    if (!s) throw std::runtime_error(std::string("missing builtin ") + name);
    return *s;
}

std::size_t episode_count(const scenarios::Report& r, const std::string& label) {
    for (const auto& ep : r.episodes) {
        if (ep.label == label) return ep.messages;
    }
    throw std::runtime_error("no episode " + label);
}

const scenarios::HostReport& host_in(const scenarios::Report& r, const std::string& name) {
    for (const auto& h : r.hosts) {
        if (h.name == name) return h;
    }
    throw std::runtime_error("no host " + name);
}

std::string trace_text(const scenarios::Report& r) {
    std::ostringstream out;
    simnet::write_trace(out, r.trace, r.node_names);
    return out.str();
}

// Processes every event up to now + dt while long timers stay pending.
void advance(test::Lan& lan, simnet::Tick dt) {
    try {
        lan.sim.run_until_quiescent(lan.sim.now() + dt);
    } catch (const simnet::SimError& e) {
        if (e.code() != simnet::SimErrc::TimeLimitExceeded) throw;
    }
}

void refresh_fcs(Bytes& b) {
    const auto fcs = wire::compute_fcs(std::span(b).first(b.size() - 4));
    for (int i = 0; i < 4; ++i) b[b.size() - 4 + i] = static_cast<std::uint8_t>(fcs >> (8 * i));
}

// ---- 1. message counts ----------------------------------------------------

Outcome message_counts() {
    Outcome o;
    struct Row {
        const char* name;
        const char* label;
        std::size_t secure;
        std::size_t baseline;
    };
    // MAC change in secure mode: 1 claim + 50 probes + 1 ArpAck.
    const Row rows[] = {{"join", "join:h0", 6, 4}, {"resolve", "resolve:h0", 2, 2}, {"mac-change-clean", "change_mac:h0", 52, 1}};
    std::string detail;
    double slowest = 0;
    for (const auto& row : rows) {
        for (const auto mode : {Mode::Secure, Mode::Baseline}) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto r = scenarios::run_scenario(builtin(row.name, mode));
            const double dt = seconds_since(t0);
            slowest = std::max(slowest, dt);
            const auto want = mode == Mode::Secure ? row.secure : row.baseline;
            const auto got = episode_count(r, row.label);
            o.require(got == want, std::string(row.name) + " " + protocol::to_string(mode) + ": " +
                                       std::to_string(got) + " != " + std::to_string(want));
            o.require(dt < 1.0, std::string(row.name) + " took " + fmt("%.3f s", dt));
        }
        detail += std::string(detail.empty() ? "" : ", ") + row.name + " " + std::to_string(row.secure) + "/" +
                  std::to_string(row.baseline);
    }
    if (o.pass) o.detail = detail + " (secure/baseline), slowest " + fmt("%.3f s", slowest);
    return o;
}

// ---- 2. attack type 1 -----------------------------------------------------

Outcome attack_type1() {
    Outcome o;
    int blocked = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto s = builtin("attack-type1", Mode::Secure);
        s.seed = seed;
        const auto r = scenarios::run_scenario(s);
        const auto& victim = host_in(r, "h1");
        const bool table_ok = r.table && victim.ip && r.table->at(*victim.ip) == victim.mac;
        const bool ok = r.verdict == Verdict::Blocked && !r.forged_ever && table_ok;
        blocked += ok;
        o.require(ok, "seed " + std::to_string(seed) + ": verdict " + to_string(r.verdict));
    }
    if (o.pass) o.detail = "BLOCKED " + std::to_string(blocked) + "/100, forged mapping never in table";
    return o;
}

// ---- 3. attack type 2 -----------------------------------------------------

Outcome attack_type2() {
    Outcome o;
    int recovered = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto s = builtin("attack-type2", Mode::Secure);
        s.seed = seed;
        const auto r = scenarios::run_scenario(s);
        const auto& h = host_in(r, "h0");
        const auto first_lease = s.dhcp.pool_first;
        const bool fresh = h.ip && *h.ip != first_lease && h.joins_completed == 2;
        const bool entry_ok = fresh && r.table && r.table->count(*h.ip) && r.table->at(*h.ip) == h.mac;
        const bool ok =
            r.verdict == Verdict::BlockedWithRecovery && h.saw_no_change && fresh && entry_ok && !r.forged_ever;
        recovered += ok;
        o.require(ok, "seed " + std::to_string(seed) + ": verdict " + to_string(r.verdict));
    }
    if (o.pass) {
        o.detail = "BLOCKED-WITH-RECOVERY " + std::to_string(recovered) +
                   "/100 (ArpNoChange, fresh lease, correct entry)";
    }
    return o;
}

// ---- 4. detection probability --------------------------------------------

Outcome detection_probability() {
    Outcome o;
    const double expected = test::detection_probability(0.1, 50);
    o.require(std::abs(expected - 0.9948462247926799) < 1e-12, "oracle disagrees with the frozen closed form");
    auto s = builtin("dos-victim-montecarlo", Mode::Secure);
    o.require(s.repeat == 10000 && s.central.n_probes == 50, "builtin is not the 10,000 x 50-probe experiment");
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = scenarios::run_scenario(s);
    const double dt = seconds_since(t0);
    o.require(r.monte_carlo.has_value(), "no Monte Carlo summary");
    if (!o.pass) return o;
    const double est = r.monte_carlo->estimate;
    o.require(r.monte_carlo->trials == 10000, "trial count");
    o.require(std::abs(est - expected) <= 0.005,
              fmt("estimate %.5f", est) + fmt(" outside %.5f +/- 0.005", expected));
    o.require(dt < 10.0, fmt("took %.2f s", dt));
    if (o.pass) {
        o.detail = fmt("kept %.5f", est) + fmt(" (se %.5f)", r.monte_carlo->std_error) +
                   fmt(" vs 1-0.9^50 = %.5f", expected) + fmt(", %.2f s", dt);
    }
    return o;
}

// ---- 5. baseline contrast ---------------------------------------------------

Outcome baseline_contrast() {
    Outcome o;
    const auto secure_s = builtin("attack-type1", Mode::Secure);
    const auto baseline_s = builtin("attack-type1", Mode::Baseline);
    const auto secure = scenarios::run_scenario(secure_s);
    const auto baseline = scenarios::run_scenario(baseline_s);

    const auto victim_ip = host_in(baseline, "h1").ip;
    bool poisoned = false;
    for (const auto& h : baseline.hosts) {
        const auto it = victim_ip ? h.arp_cache.find(*victim_ip) : h.arp_cache.end();
        poisoned |= it != h.arp_cache.end() && it->second == baseline_s.attacker_mac;
    }
    bool secure_clean = secure.table.has_value();
    for (const auto& [ip, mac] : secure.table.value_or(std::map<wire::Ipv4Addr, wire::MacAddr>{})) {
        secure_clean &= mac != secure_s.attacker_mac;
    }
    for (const auto& h : secure.hosts) {
        for (const auto& [ip, mac] : h.arp_cache) secure_clean &= mac != secure_s.attacker_mac;
    }
    o.require(baseline.verdict == Verdict::Succeeded && poisoned, "baseline was not poisoned");
    o.require(secure.verdict == Verdict::Blocked && secure_clean, "secure mode did not block");
    if (o.pass) o.detail = "baseline SUCCEEDED (arp_cache poisoned), secure BLOCKED";
    return o;
}

// ---- 6. codec properties ---------------------------------------------------

struct Expected {
    std::string name;
    std::size_t offset;
    Bytes bytes;
};

Bytes mac_bytes(const wire::MacAddr& m) { return {m.octets.begin(), m.octets.end()}; }
Bytes ip_bytes(const wire::Ipv4Addr& a) { return {a.octets.begin(), a.octets.end()}; }
Bytes text_bytes(const char* s) { return Bytes(s, s + std::strlen(s)); }

// Layout of every frame type, written out field by field: header, the field
// list of the corresponding message format, auth section, FCS.
std::vector<Expected> layout_of(const wire::Frame& f, const Bytes& wire_bytes) {
    std::vector<Expected> rows{{"dest", 0, mac_bytes(f.dest)}, {"src", 6, mac_bytes(f.src)}};
    const Bytes fcs(wire_bytes.end() - 4, wire_bytes.end());

    auto std_arp = [&](const wire::StdArp& a, std::size_t at, const char* prefix) {
        auto n = [&](const char* base) { return std::string(prefix) + base; };
        const std::uint8_t op = a.op == wire::ArpOp::Request ? 1 : 2;
        rows.push_back({n("htype"), at, {0x00, 0x01}});
        rows.push_back({n("ptype"), at + 2, {0x08, 0x00}});
        rows.push_back({n("hlen"), at + 4, {6}});
        rows.push_back({n("plen"), at + 5, {4}});
        rows.push_back({n("oper"), at + 6, {0x00, op}});
        rows.push_back({n("sender_mac"), at + 8, mac_bytes(a.sender_mac)});
        rows.push_back({n("sender_ip"), at + 14, ip_bytes(a.sender_ip)});
        rows.push_back({n("target_mac"), at + 18, mac_bytes(a.target_mac)});
        rows.push_back({n("target_ip"), at + 24, ip_bytes(a.target_ip)});
    };
    auto signature = [&](const wire::SignatureAuth& s, std::size_t at) {
        rows.push_back({"auth.kind", at, {0x02}});
        rows.push_back({"auth.signature", at + 1, Bytes(s.signature.begin(), s.signature.end())});
        rows.push_back({"auth.cert_len", at + 65,
                        {static_cast<std::uint8_t>(s.cert.size() >> 8), static_cast<std::uint8_t>(s.cert.size())}});
        rows.push_back({"auth.cert", at + 67, s.cert});
        rows.push_back({"fcs", at + 67 + s.cert.size(), fcs});
    };
    auto tag = [&](const wire::KeyedTag& t, std::size_t at) {
        rows.push_back({"auth.kind", at, {0x01}});
        rows.push_back({"auth.tag", at + 1, Bytes(t.tag.begin(), t.tag.end())});
        rows.push_back({"fcs", at + 33, fcs});
    };
    auto marker = [&](const char* m, std::uint8_t type, wire::Ipv4Addr ip) {
        rows.push_back({"ethertype", 12, {0x88, 0xB5}});
        rows.push_back({"msg_type", 14, {type}});
        rows.push_back({"marker", 15, text_bytes(m)});
        rows.push_back({"ip", 18, ip_bytes(ip)});
        signature(std::get<wire::SignatureAuth>(f.auth), 22);
    };

    if (const auto* b = std::get_if<wire::IpSend>(&f.body)) {
        rows.push_back({"ethertype", 12, {0x88, 0xB5}});
        rows.push_back({"msg_type", 14, {0x01}});
        rows.push_back({"ip", 15, ip_bytes(b->ip)});
        rows.push_back({"host_mac", 19, mac_bytes(b->mac)});
        tag(std::get<wire::KeyedTag>(f.auth), 25);
    } else if (const auto* b = std::get_if<wire::IpReply>(&f.body)) {
        rows.push_back({"ethertype", 12, {0x88, 0xB5}});
        rows.push_back({"msg_type", 14, {0x02}});
        rows.push_back({"ip", 15, ip_bytes(b->ip)});
        rows.push_back({"host_mac", 19, mac_bytes(b->mac)});
        rows.push_back({"ack", 25, {static_cast<std::uint8_t>(b->ack ? 1 : 0)}});
        tag(std::get<wire::KeyedTag>(f.auth), 26);
    } else if (const auto* b = std::get_if<wire::ArpCheck>(&f.body)) {
        marker("ACH", 0x03, b->ip);
    } else if (const auto* b = std::get_if<wire::ArpNoChange>(&f.body)) {
        marker("ANC", 0x04, b->ip);
    } else if (const auto* b = std::get_if<wire::ArpAck>(&f.body)) {
        marker("ACK", 0x05, b->ip);
    } else if (const auto* b = std::get_if<wire::StdArp>(&f.body)) {
        rows.push_back({"ethertype", 12, {0x08, 0x06}});
        std_arp(*b, 14, "");
        rows.push_back({"fcs", 42, fcs});
    } else if (const auto* b = std::get_if<wire::SignedArpReply>(&f.body)) {
        rows.push_back({"ethertype", 12, {0x88, 0xB5}});
        rows.push_back({"msg_type", 14, {0x06}});
        std_arp(b->inner, 15, "arp.");
        signature(std::get<wire::SignatureAuth>(f.auth), 43);
    }
    return rows;
}

std::vector<std::pair<std::string, wire::Frame>> golden_frames() {
    const auto m = crypto::AuthMaterial::derive(1);
    const auto central = wire::MacAddr::local(0x01);
    const auto dhcp = wire::MacAddr::local(0x02);
    const auto host = wire::MacAddr::local(0x0A);
    const auto other = wire::MacAddr::local(0x0B);
    const wire::Ipv4Addr ip{{10, 0, 0, 10}};
    const wire::Ipv4Addr ip2{{10, 0, 0, 11}};

    std::vector<std::pair<std::string, wire::Frame>> out;
    auto tagged = [&](const char* name, wire::MacAddr d, wire::MacAddr s, wire::Body b) {
        wire::Frame f{d, s, std::move(b), wire::NoAuth{}};
        crypto::seal_with_tag(f, m.dhcp_central_key);
        out.emplace_back(name, f);
    };
    auto signed_ = [&](const char* name, wire::Body b) {
        wire::Frame f{host, central, std::move(b), wire::NoAuth{}};
        crypto::seal_with_signature(f, m.central_keys, m.central_cert);
        out.emplace_back(name, f);
    };
    tagged("IpSend", central, dhcp, wire::IpSend{ip, host});
    tagged("IpReply", dhcp, central, wire::IpReply{ip, host, true});
    signed_("ArpCheck", wire::ArpCheck{ip});
    signed_("ArpNoChange", wire::ArpNoChange{ip});
    signed_("ArpAck", wire::ArpAck{ip});
    out.emplace_back("ArpRequest", wire::Frame{wire::MacAddr::broadcast(), host,
                                               wire::StdArp{wire::ArpOp::Request, host, ip, {}, ip2}, wire::NoAuth{}});
    out.emplace_back("ArpReply", wire::Frame{host, other, wire::StdArp{wire::ArpOp::Reply, other, ip2, host, ip},
                                             wire::NoAuth{}});
    signed_("SignedArpReply", wire::SignedArpReply{wire::StdArp{wire::ArpOp::Reply, other, ip2, host, ip}});
    return out;
}

Outcome codec_properties() {
    Outcome o;
    std::mt19937_64 rng(2024);
    constexpr int kPerType = 10000;
    for (std::size_t kind = 0; kind < test::kFrameKinds; ++kind) {
        for (int i = 0; i < kPerType; ++i) {
            const auto f = test::random_frame(kind, rng);
            const auto bytes = wire::encode_frame(f);
            bool ok = false;
            try {
                ok = wire::decode_frame(bytes) == f && wire::encode_frame(wire::decode_frame(bytes)) == bytes;
            } catch (const wire::DecodeError&) {
            }
            o.require(ok, "round trip failed for body kind " + std::to_string(kind));
        }
    }

    std::size_t corruptions = 0;
    std::size_t layout_fields = 0;
    for (const auto& [name, frame] : golden_frames()) {
        const auto bytes = wire::encode_frame(frame);
        for (std::size_t pos = 0; pos < bytes.size(); ++pos) {
            for (int x = 1; x < 256; ++x) {
                auto bad = bytes;
                bad[pos] ^= static_cast<std::uint8_t>(x);
                bool rejected = false;
                try {
                    wire::decode_frame(bad);
                } catch (const wire::DecodeError&) {
                    rejected = true;
                }
                ++corruptions;
                o.require(rejected, name + ": corruption at byte " + std::to_string(pos) + " accepted");
            }
        }

        const auto expected = layout_of(frame, bytes);
        const auto fields = wire::dissect(frame);
        o.require(fields.size() == expected.size(), name + ": field count differs from the layout table");
        std::size_t covered = 0;
        for (std::size_t i = 0; i < expected.size() && i < fields.size(); ++i) {
            const auto& e = expected[i];
            const auto& f = fields[i];
            o.require(f.name == e.name && f.offset == e.offset && f.width == e.bytes.size(),
                      name + ": field " + f.name + " at " + std::to_string(f.offset) + "/" + std::to_string(f.width) +
                          ", table says " + e.name + " at " + std::to_string(e.offset) + "/" +
                          std::to_string(e.bytes.size()));
            o.require(e.offset + e.bytes.size() <= bytes.size() &&
                          std::equal(e.bytes.begin(), e.bytes.end(), bytes.begin() + e.offset),
                      name + ": wire bytes of " + e.name + " differ from the table");
            o.require(e.offset == covered, name + ": gap or overlap before " + e.name);
            covered = e.offset + e.bytes.size();
            ++layout_fields;
        }
        o.require(covered == bytes.size(), name + ": layout does not cover the frame");
    }
    if (o.pass) {
        o.detail = std::to_string(kPerType) + " round trips x " + std::to_string(test::kFrameKinds) + " body types, " +
                   std::to_string(corruptions) + " single-byte corruptions rejected, " +
                   std::to_string(layout_fields) + " layout fields match";
    }
    return o;
}

// ---- 7. auth properties ----------------------------------------------------

Outcome auth_properties() {
    Outcome o;
    const auto m = crypto::AuthMaterial::derive(1);
    std::mt19937_64 rng(77);
    constexpr int kTrials = 10000;

    int tag_accepts = 0;
    for (int i = 0; i < kTrials; ++i) {
        auto f = test::random_frame(i % 2, rng);  // IpSend or IpReply with a random tag
        tag_accepts += crypto::check_tag(f, m.dhcp_central_key);
    }

    const auto rogue_root = crypto::KeyPair::from_seed(crypto::Seed{0xEE});
    const auto rogue = crypto::KeyPair::from_seed(crypto::Seed{0xEF});
    const auto rogue_cert = crypto::issue_certificate(rogue_root, "central-server", rogue.public_key());
    const auto cert_bytes = m.central_cert.serialize();
    int sig_accepts = 0;
    for (int i = 0; i < kTrials; ++i) {
        auto f = test::random_frame(2 + i % 3, rng);  // ArpCheck / ArpNoChange / ArpAck
        if (i % 2 == 0) {
            // Random signature under the genuine certificate.
            auto& s = std::get<wire::SignatureAuth>(f.auth);
            s.cert = cert_bytes;
        } else {
            // Well-formed signature by a key whose certificate chains to another root.
            crypto::seal_with_signature(f, rogue, rogue_cert);
        }
        sig_accepts += crypto::check_signature(f, m.root);
    }
    o.require(tag_accepts == 0, std::to_string(tag_accepts) + " forged tags accepted");
    o.require(sig_accepts == 0, std::to_string(sig_accepts) + " forged signatures accepted");

    // Receivers: every byte of a genuine signed or tagged frame flipped in turn
    // (FCS recomputed so only authentication can object).
    test::Lan lan(Mode::Secure, 1, 5, {}, protocol::HostConfig{50, 1000000, 1000000, 20});
    auto& inj = lan.add_injector();
    lan.join_all();
    auto& h = *lan.hosts[0];
    const auto my_ip = *h.ip();
    const wire::Ipv4Addr unknown{{10, 0, 0, 200}};
    const auto table_before = lan.central->table();

    // Pending resolution for an address the Central Server does not know, and
    // a pending MAC change the Central Server never hears about.
    lan.at(lan.sim.now() + 1, [&] { h.resolve(unknown); });
    advance(lan, 100);
    lan.sim.set_policy(lan.central->id(), {1.0, 1});
    lan.at(lan.sim.now() + 1, [&] { h.change_mac(wire::MacAddr::local(0x55)); });
    advance(lan, 100);
    lan.sim.set_policy(lan.central->id(), {0.0, 1});
    const auto here = h.mac();

    wire::Frame ip_send{test::kCentralMac, inj.mac(), wire::IpSend{unknown, inj.mac()}, wire::NoAuth{}};
    crypto::seal_with_tag(ip_send, lan.auth.dhcp_central_key);
    const auto& lm = lan.auth;
    auto lan_signed = [&](wire::Body body) {
        wire::Frame f{here, test::kCentralMac, std::move(body), wire::NoAuth{}};
        crypto::seal_with_signature(f, lm.central_keys, lm.central_cert);
        return wire::encode_frame(f);
    };
    const std::vector<Bytes> originals{
        lan_signed(wire::SignedArpReply{wire::StdArp{wire::ArpOp::Reply, inj.mac(), unknown, here, my_ip}}),
        lan_signed(wire::ArpCheck{my_ip}), lan_signed(wire::ArpAck{my_ip}), lan_signed(wire::ArpNoChange{my_ip}),
        wire::encode_frame(ip_send)};

    std::size_t tampered = 0;
    const auto tamper_start = lan.sim.now();
    const auto rejected_before = h.rejected_frames();
    for (const auto& original : originals) {
        for (std::size_t pos = 0; pos + 4 < original.size(); ++pos) {
            auto bad = original;
            bad[pos] ^= 0x01;
            refresh_fcs(bad);
            ++tampered;
            lan.at(lan.sim.now() + 1, [&inj, bad] { inj.emit(bad); });
            advance(lan, 100);
        }
    }
    const bool cache_untouched = !h.arp_cache().count(unknown);
    const bool still_pending = h.change_outcome() == protocol::ChangeOutcome::Pending;
    // Hosts answer an authentic probe to the probing source; here they must stay silent.
    const auto& entries = lan.sim.trace().entries();
    const bool no_answers = std::none_of(entries.begin(), entries.end(), [&](const simnet::TraceEntry& e) {
        return e.time > tamper_start && e.src == h.id();
    });
    const bool table_untouched = lan.central->table() == table_before;
    o.require(cache_untouched, "a tampered signed reply reached the ARP cache");
    o.require(still_pending, "a tampered ArpAck/ArpNoChange changed the host's state");
    o.require(no_answers, "a tampered probe was answered");
    o.require(table_untouched, "a tampered IP_send changed the table");

    // Control: the untampered frames are accepted by the same receivers.
    lan.at(lan.sim.now() + 1, [&] { inj.emit(originals[0]); });
    advance(lan, 100);
    o.require(h.arp_cache().count(unknown) == 1, "control: genuine signed reply was not accepted");
    const auto before_probe = entries.size();
    lan.at(lan.sim.now() + 1, [&] { inj.emit(originals[1]); });
    advance(lan, 100);
    o.require(std::any_of(entries.begin() + static_cast<std::ptrdiff_t>(before_probe), entries.end(),
                          [&](const simnet::TraceEntry& e) { return e.src == h.id(); }),
              "control: genuine ArpCheck was not answered");
    lan.at(lan.sim.now() + 1, [&] { inj.emit(originals[2]); });
    advance(lan, 100);
    o.require(h.change_outcome() == protocol::ChangeOutcome::Acked, "control: genuine ArpAck was not accepted");

    if (o.pass) {
        o.detail = "0/" + std::to_string(kTrials) + " forged tags and 0/" + std::to_string(kTrials) +
                   " forged signatures accepted; " + std::to_string(tampered) + " tampered frames rejected (" +
                   std::to_string(h.rejected_frames() - rejected_before) +
                   " by hosts), table and cache untouched";
    }
    return o;
}

// ---- 8. determinism --------------------------------------------------------

Outcome determinism() {
    Outcome o;
    int checked = 0;
    for (const auto& s : scenarios::builtin_scenarios()) {
        const auto a = scenarios::run_scenario(s);
        const auto b = scenarios::run_scenario(s);
        o.require(trace_text(a) == trace_text(b), s.name + ": traces differ");
        o.require(scenarios::to_json(a).dump() == scenarios::to_json(b).dump(), s.name + ": reports differ");
        ++checked;
    }
    if (o.pass) o.detail = std::to_string(checked) + " builtins, byte-identical trace and report on rerun";
    return o;
}

// ---- 9. DOS retry ---------------------------------------------------------

Outcome dos_retry() {
    Outcome o;
    const auto s = builtin("dos-central", Mode::Secure);
    const auto r = scenarios::run_scenario(s);
    simnet::Tick flood_end = 0;
    simnet::Tick change_at = 0;
    for (const auto& ev : s.script) {
        if (const auto* f = std::get_if<scenarios::DosFloodCentralAction>(&ev.action)) flood_end = ev.at + f->duration;
        if (std::holds_alternative<scenarios::ChangeMacAction>(ev.action)) change_at = ev.at;
    }
    const auto& h = host_in(r, "h0");
    std::optional<simnet::Tick> acked_at;
    for (const auto& e : r.trace.entries()) {
        if (e.kind == "ArpAck" && e.dest == h.mac && !acked_at) acked_at = e.time;
    }
    const auto limited = r.central_events.count("RateLimited") ? r.central_events.at("RateLimited") : 0;
    o.require(flood_end > change_at, "scenario does not overlap the change with the flood");
    o.require(h.change_attempts > 1 && limited > 0, "the first change request was not rate-limited");
    o.require(h.change_outcome == protocol::ChangeOutcome::Acked, "change never acknowledged");
    o.require(acked_at && *acked_at > flood_end, "ArpAck did not come after the flood window");
    o.require(r.table && h.ip && r.table->at(*h.ip) == h.mac, "table does not hold the new MAC");
    o.require(!r.forged_ever && r.verdict == Verdict::Blocked, "a forged entry appeared");
    if (o.pass) {
        o.detail = std::to_string(limited) + " claims rate-limited; change acked on attempt " +
                   std::to_string(h.change_attempts) + " at t=" + std::to_string(*acked_at) + " (flood ended t=" +
                   std::to_string(flood_end) + "); no forged entry at any instant";
    }
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"message counts", message_counts},
        {"attack type 1 blocked", attack_type1},
        {"attack type 2 blocked with recovery", attack_type2},
        {"detection probability", detection_probability},
        {"baseline vulnerability contrast", baseline_contrast},
        {"codec properties", codec_properties},
        {"auth properties", auth_properties},
        {"determinism", determinism},
        {"DOS retry", dos_retry},
    };
    int failed = 0;
    int n = 0;
    for (const auto& [title, check] : criteria) {
        ++n;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s  %d. %s: %s\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed ? 1 : 0;
}
