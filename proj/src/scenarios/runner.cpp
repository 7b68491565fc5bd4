#include "csarp/scenarios/runner.hpp"

#include "csarp/crypto/frame_auth.hpp"
#include "csarp/protocol/attacker.hpp"
#include "csarp/protocol/central_server.hpp"
#include "csarp/protocol/dhcp_server.hpp"
#include "csarp/protocol/host.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

namespace csarp::scenarios {

std::uint64_t trial_seed(std::uint64_t base, std::uint32_t index) noexcept {
    // splitmix64 output for counter position index + 1.
    std::uint64_t z = base + (std::uint64_t{index} + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

using protocol::Host;

class World {
public:
    World(const Scenario& s, std::uint64_t seed, const crypto::AuthMaterial& auth) : s_(s), sim_(seed) {
        sim_.set_default_policy(s.default_policy);
        if (s.mode == Mode::Secure) {
            central_ = &sim_.emplace_node<protocol::CentralServer>(s.central_mac, "central", s.central,
                                                                   auth.dhcp_central_key, auth.central_keys,
                                                                   auth.central_cert);
            ids_["central"] = central_->id();
        }
        dhcp_ = &sim_.emplace_node<protocol::DhcpServer>(s.dhcp_mac, "dhcp", s.mode, s.dhcp, s.central_mac,
                                                         auth.dhcp_central_key);
        ids_["dhcp"] = dhcp_->id();
        for (std::size_t i = 0; i < s.hosts.size(); ++i) {
            const auto& spec = s.hosts[i];
            auto& h = sim_.emplace_node<Host>(spec.mac.value_or(default_host_mac(i)), spec.name, s.mode, s.host,
                                              auth.root);
            hosts_.push_back(&h);
            ids_[spec.name] = h.id();
        }
        if (s.attacker) {
            std::optional<wire::MacAddr> central;
            if (s.mode == Mode::Secure) central = s.central_mac;
            attacker_ = &sim_.emplace_node<protocol::Attacker>(s.attacker_mac, "attacker", s.mode, central);
            ids_["attacker"] = attacker_->id();
        }
        sim_.set_observer([this] { audit(); });

        for (std::size_t i = 0; i < s.script.size(); ++i) {
            const auto& ev = s.script[i];
            sim_.schedule_action(
                ev.at, [this, &ev] { perform(ev.action); }, static_cast<simnet::EpisodeId>(i + 1));
        }
    }

    void run() { sim_.run_until_quiescent(s_.max_time); }

    Report report(const std::vector<std::string>& labels) {
        Report r;
        r.scenario = s_.name;
        r.family = s_.family;
        r.mode = s_.mode;
        r.end_time = sim_.now();

        std::map<simnet::EpisodeId, std::map<std::string, std::set<std::uint64_t>>> kinds;
        for (const auto& e : sim_.trace().entries()) kinds[e.episode][e.kind].insert(e.send_id);
        const auto counts = recount(sim_.trace());
        for (std::size_t i = 0; i < s_.script.size(); ++i) {
            EpisodeReport ep;
            ep.id = static_cast<simnet::EpisodeId>(i + 1);
            ep.label = labels[i];
            ep.at = s_.script[i].at;
            if (const auto it = counts.find(ep.id); it != counts.end()) ep.messages = it->second;
            for (const auto& [kind, ids] : kinds[ep.id]) ep.by_kind[kind] = ids.size();
            r.episodes.push_back(std::move(ep));
        }
        r.total_messages = sim_.trace().message_count();

        if (central_) {
            r.table = central_->table();
            for (const auto& e : central_->log()) ++r.central_events[protocol::to_string(e.event)];
        }
        for (const auto* h : hosts_) {
            r.hosts.push_back(HostReport{h->name(), h->mac(), h->ip(), h->arp_cache(), h->joins_completed(),
                                         h->change_outcome(), h->change_attempts(), h->saw_no_change(),
                                         h->rejected_frames()});
        }
        r.forged_ever = forged_;
        r.verdict = verdict();
        r.trace = sim_.trace();
        r.node_names = sim_.node_names();
        return r;
    }

private:
    Host& host(const std::string& name) {
        return static_cast<Host&>(sim_.node(ids_.at(name)));
    }

    // A host name resolves to that host's current address.
    std::optional<wire::Ipv4Addr> address(const std::string& target) {
        if (const auto ip = wire::Ipv4Addr::parse(target)) return ip;
        return host(target).ip();
    }

    wire::MacAddr fresh_mac() {
        for (;;) {
            const auto mac = wire::MacAddr::local(0x100 + next_fresh_++);
            if (!sim_.owner_of(mac)) return mac;
        }
    }

    void perform(const Action& action) {
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, JoinAction>) {
                    host(a.host).start_join();
                } else if constexpr (std::is_same_v<T, ResolveAction>) {
                    host(a.host).resolve(address(a.target).value_or(wire::Ipv4Addr{}));
                } else if constexpr (std::is_same_v<T, ChangeMacAction>) {
                    auto& h = host(a.host);
                    previous_mac_[a.host] = h.mac();
                    h.change_mac(a.new_mac.value_or(fresh_mac()));
                } else if constexpr (std::is_same_v<T, RenewAction>) {
                    dhcp_->renew(host(a.host).mac());
                } else if constexpr (std::is_same_v<T, SpoofMappingAction>) {
                    if (const auto ip = address(a.victim)) attacker_->launch(protocol::SpoofMapping{*ip});
                } else if constexpr (std::is_same_v<T, RaceOldMacAction>) {
                    const auto ip = host(a.victim).ip();
                    if (ip) attacker_->launch(protocol::RaceOldMac{previous_mac_.at(a.victim), *ip});
                } else if constexpr (std::is_same_v<T, DosFloodCentralAction>) {
                    if (const auto ip = address(a.claimed)) {
                        attacker_->launch(protocol::DosFloodCentral{*ip, a.interval, a.duration});
                    }
                } else if constexpr (std::is_same_v<T, DosVictimAction>) {
                    auto& victim = host(a.victim);
                    if (victim.ip()) {
                        attacker_->launch(protocol::DosVictim{victim.id(), *victim.ip(), a.delivery_probability});
                    }
                } else if constexpr (std::is_same_v<T, SetPolicyAction>) {
                    sim_.set_policy(ids_.at(a.node), a.policy);
                } else if constexpr (std::is_same_v<T, DropNextAction>) {
                    sim_.drop_next(ids_.at(a.node), a.count);
                }
            },
            action);
    }

    // A binding is genuine if some host held that address under that MAC, or
    // the DHCP server leased the address to that MAC.
    bool genuine(const wire::Ipv4Addr& ip, const wire::MacAddr& mac) const {
        if (held_.count({ip, mac})) return true;
        const auto it = dhcp_->leases().find(ip);
        return it != dhcp_->leases().end() && it->second.mac == mac;
    }

    void audit() {
        for (const auto* h : hosts_) {
            if (h->ip()) held_.insert({*h->ip(), h->mac()});
        }
        if (forged_) return;
        if (central_) {
            for (const auto& [ip, mac] : central_->table()) forged_ |= !genuine(ip, mac);
        }
        for (const auto* h : hosts_) {
            for (const auto& [ip, mac] : h->arp_cache()) forged_ |= !genuine(ip, mac);
        }
    }

    Verdict verdict() const {
        const bool attacked =
            std::any_of(s_.script.begin(), s_.script.end(), [](const ScriptEvent& ev) { return is_attack(ev.action); });
        if (!attacked) return Verdict::NotApplicable;
        if (forged_) return Verdict::Succeeded;
        for (const auto* h : hosts_) {
            if (!h->saw_no_change() || !h->ip() || !central_) continue;
            const auto it = central_->table().find(*h->ip());
            if (it != central_->table().end() && it->second == h->mac()) return Verdict::BlockedWithRecovery;
        }
        return Verdict::Blocked;
    }

    const Scenario& s_;
    simnet::Simulation sim_;
    protocol::CentralServer* central_ = nullptr;
    protocol::DhcpServer* dhcp_ = nullptr;
    std::vector<Host*> hosts_;
    protocol::Attacker* attacker_ = nullptr;
    std::map<std::string, simnet::NodeId> ids_;
    std::map<std::string, wire::MacAddr> previous_mac_;
    std::set<std::pair<wire::Ipv4Addr, wire::MacAddr>> held_;
    std::uint32_t next_fresh_ = 0;
    bool forged_ = false;
};

Report run_trial(const Scenario& s, std::uint64_t seed, const crypto::AuthMaterial& auth,
                 const std::vector<std::string>& labels) {
    World world(s, seed, auth);
    world.run();
    auto r = world.report(labels);
    r.seed = seed;
    return r;
}

void check_expectations(const Scenario& s, Report& r, const std::vector<Verdict>& verdicts) {
    for (const auto& [label, expected] : s.expect.messages) {
        for (const auto& ep : r.episodes) {
            if (ep.label == label && ep.messages != expected) {
                r.failures.push_back("episode " + label + ": expected " + std::to_string(expected) +
                                     " messages, got " + std::to_string(ep.messages));
            }
        }
    }
    if (s.expect.verdict) {
        std::size_t wrong = 0;
        for (const auto v : verdicts) wrong += v != *s.expect.verdict;
        if (wrong) {
            r.failures.push_back(std::string("verdict: expected ") + to_string(*s.expect.verdict) + ", got " +
                                 to_string(r.verdict) +
                                 (verdicts.size() > 1 ? " (" + std::to_string(wrong) + " of " +
                                                            std::to_string(verdicts.size()) + " trials differ)"
                                                      : std::string()));
        }
    }
    for (const auto& [name, expected] : s.expect.change_outcomes) {
        for (const auto& h : r.hosts) {
            if (h.name == name && h.change_outcome != expected) {
                r.failures.push_back("host " + name + ": expected change outcome " + protocol::to_string(expected) +
                                     ", got " + protocol::to_string(h.change_outcome));
            }
        }
    }
    if (s.expect.monte_carlo && r.monte_carlo) {
        const auto& t = *s.expect.monte_carlo;
        const double err = std::abs(r.monte_carlo->estimate - t.probability);
        if (!(err <= t.tolerance)) {
            r.failures.push_back("monte carlo: estimate " + std::to_string(r.monte_carlo->estimate) + " is " +
                                 std::to_string(err) + " from " + std::to_string(t.probability) +
                                 " (tolerance " + std::to_string(t.tolerance) + ")");
        }
    }
}

}  // namespace

Report run_scenario(const Scenario& s, const RunOptions& options) {
    validate(s);
    const auto labels = episode_labels(s);
    const auto auth = crypto::AuthMaterial::derive(s.seed);

    if (s.repeat == 1) {
        auto r = run_trial(s, s.seed, auth, labels);
        check_expectations(s, r, {r.verdict});
        return r;
    }

    // Trials are independent; each worker claims the next index and the fold
    // below runs in index order, so the thread count cannot change the result.
    std::vector<Verdict> verdicts(s.repeat);
    std::vector<std::exception_ptr> errors(s.repeat);
    std::optional<Report> first;
    std::atomic<std::uint32_t> next{0};
    auto work = [&] {
        for (std::uint32_t i = next++; i < s.repeat; i = next++) {
            try {
                auto r = run_trial(s, trial_seed(s.seed, i), auth, labels);
                verdicts[i] = r.verdict;
                if (i == 0) first = std::move(r);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, s.repeat);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    Report r = std::move(*first);
    r.seed = s.seed;
    MonteCarloSummary mc;
    mc.trials = s.repeat;
    for (const auto v : verdicts) {
        ++mc.verdicts[v];
        mc.blocked += v == Verdict::Blocked || v == Verdict::BlockedWithRecovery;
    }
    mc.estimate = static_cast<double>(mc.blocked) / mc.trials;
    mc.std_error = std::sqrt(mc.estimate * (1.0 - mc.estimate) / mc.trials);
    r.monte_carlo = mc;
    check_expectations(s, r, verdicts);
    return r;
}

}  // namespace csarp::scenarios
