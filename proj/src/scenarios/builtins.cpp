#include "csarp/scenarios/builtins.hpp"

#include <algorithm>
#include <cmath>

namespace csarp::scenarios {

namespace {

Scenario base(std::string name, Mode mode, std::vector<std::string> hosts) {
    Scenario s;
    s.name = name;
    s.family = std::move(name);
    s.mode = mode;
    for (auto& h : hosts) s.hosts.push_back({std::move(h), std::nullopt});
    return s;
}

Scenario join(Mode mode) {
    auto s = base("join", mode, {"h0"});
    s.script = {{1, JoinAction{"h0"}, {}}};
    s.expect.messages["join:h0"] = mode == Mode::Secure ? 6 : 4;
    return s;
}

Scenario resolve(Mode mode) {
    auto s = base("resolve", mode, {"h0", "h1"});
    s.script = {{1, JoinAction{"h0"}, {}}, {100, JoinAction{"h1"}, {}}, {200, ResolveAction{"h0", "h1"}, {}}};
    s.expect.messages["resolve:h0"] = 2;
    return s;
}

Scenario mac_change(Mode mode) {
    auto s = base("mac-change-clean", mode, {"h0"});
    s.script = {{1, JoinAction{"h0"}, {}}, {100, ChangeMacAction{"h0", std::nullopt}, {}}};
    // Secure: one claim, the probe burst, one ArpAck. Baseline: one gratuitous reply.
    s.expect.messages["change_mac:h0"] = mode == Mode::Secure ? 2 + s.central.n_probes : 1;
    if (mode == Mode::Secure) s.expect.change_outcomes["h0"] = protocol::ChangeOutcome::Acked;
    return s;
}

Scenario attack_type1(Mode mode) {
    auto s = base("attack-type1", mode, {"h0", "h1"});
    s.attacker = true;
    s.script = {{1, JoinAction{"h0"}, {}}, {100, JoinAction{"h1"}, {}}, {200, SpoofMappingAction{"h1"}, {}}};
    s.expect.verdict = mode == Mode::Secure ? Verdict::Blocked : Verdict::Succeeded;
    return s;
}

Scenario attack_type2() {
    auto s = base("attack-type2", Mode::Secure, {"h0"});
    s.attacker = true;
    s.script = {{1, JoinAction{"h0"}, {}},
                {100, ChangeMacAction{"h0", std::nullopt}, {}},
                {100, RaceOldMacAction{"h0"}, {}}};
    s.expect.verdict = Verdict::BlockedWithRecovery;
    s.expect.change_outcomes["h0"] = protocol::ChangeOutcome::Rejected;
    return s;
}

Scenario dos_central() {
    auto s = base("dos-central", Mode::Secure, {"h0", "h1"});
    s.attacker = true;
    // The flood claims a bystander's address and outlasts several retry
    // periods; the change lands between two bucket refills.
    s.script = {{1, JoinAction{"h0"}, {}},
                {20, JoinAction{"h1"}, {}},
                {200, DosFloodCentralAction{"h1", 1, 2000}, {}},
                {350, ChangeMacAction{"h0", std::nullopt}, {}}};
    s.expect.verdict = Verdict::Blocked;
    s.expect.change_outcomes["h0"] = protocol::ChangeOutcome::Acked;
    return s;
}

Scenario dos_victim_montecarlo() {
    auto s = base("dos-victim-montecarlo", Mode::Secure, {"h0"});
    s.attacker = true;
    s.repeat = 10000;
    constexpr double p = 0.1;
    s.script = {{1, JoinAction{"h0"}, {}}, {100, DosVictimAction{"h0", p}, {}}};
    // The old entry survives unless every probe to the victim is lost.
    const double keep = 1.0 - std::pow(1.0 - p, static_cast<double>(s.central.n_probes));
    s.expect.monte_carlo = MonteCarloTarget{keep, 0.005};
    return s;
}

}  // namespace

const std::vector<Scenario>& builtin_scenarios() {
    static const std::vector<Scenario> all = [] {
        std::vector<Scenario> v;
        for (auto mode : {Mode::Secure, Mode::Baseline}) {
            v.push_back(join(mode));
            v.push_back(resolve(mode));
            v.push_back(mac_change(mode));
            v.push_back(attack_type1(mode));
        }
        v.push_back(attack_type2());
        v.push_back(dos_central());
        v.push_back(dos_victim_montecarlo());
        std::stable_partition(v.begin(), v.end(), [](const Scenario& s) { return s.mode == Mode::Secure; });
        return v;
    }();
    return all;
}

namespace {

std::string_view canonical(std::string_view name) { return name == "mac-change" ? "mac-change-clean" : name; }

}  // namespace

std::optional<Scenario> find_builtin(std::string_view name, Mode mode) {
    name = canonical(name);
    for (const auto& s : builtin_scenarios()) {
        if (s.name == name && s.mode == mode) return s;
    }
    return std::nullopt;
}

bool has_builtin(std::string_view name) {
    name = canonical(name);
    for (const auto& s : builtin_scenarios()) {
        if (s.name == name) return true;
    }
    return false;
}

}  // namespace csarp::scenarios
