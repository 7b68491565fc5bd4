#include "csarp/scenarios/scenario.hpp"

#include <algorithm>
#include <set>

namespace csarp::scenarios {

using nlohmann::json;

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::NotApplicable: return "N/A";
        case Verdict::Blocked: return "BLOCKED";
        case Verdict::BlockedWithRecovery: return "BLOCKED-WITH-RECOVERY";
        case Verdict::Succeeded: return "SUCCEEDED";
    }
    return "?";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
    for (auto v : {Verdict::NotApplicable, Verdict::Blocked, Verdict::BlockedWithRecovery, Verdict::Succeeded}) {
        if (s == to_string(v)) return v;
    }
    return std::nullopt;
}

std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "secure") return Mode::Secure;
    if (s == "baseline") return Mode::Baseline;
    return std::nullopt;
}

std::optional<protocol::ChangeOutcome> parse_change_outcome(std::string_view s) {
    using protocol::ChangeOutcome;
    for (auto o : {ChangeOutcome::None, ChangeOutcome::Pending, ChangeOutcome::Acked, ChangeOutcome::Rejected,
                   ChangeOutcome::GaveUp}) {
        if (s == protocol::to_string(o)) return o;
    }
    return std::nullopt;
}

const char* action_name(const Action& a) noexcept {
    static constexpr const char* names[] = {"join",           "resolve",           "change_mac",
                                            "renew",          "spoof_mapping",     "race_old_mac",
                                            "dos_flood_central", "dos_victim",     "set_policy",
                                            "drop_next"};
    static_assert(std::size(names) == std::variant_size_v<Action>);
    return names[a.index()];
}

bool is_attack(const Action& a) noexcept {
    return std::holds_alternative<SpoofMappingAction>(a) || std::holds_alternative<RaceOldMacAction>(a) ||
           std::holds_alternative<DosFloodCentralAction>(a) || std::holds_alternative<DosVictimAction>(a);
}

wire::MacAddr default_host_mac(std::size_t index) { return wire::MacAddr::local(0x0A + static_cast<std::uint32_t>(index)); }

namespace {

std::string subject_of(const Action& a) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (requires { x.host; }) {
                return x.host;
            } else if constexpr (requires { x.victim; }) {
                return x.victim;
            } else if constexpr (std::is_same_v<T, DosFloodCentralAction>) {
                return x.claimed;
            } else {
                return x.node;
            }
        },
        a);
}

bool is_ip_literal(const std::string& s) { return wire::Ipv4Addr::parse(s).has_value(); }

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

}  // namespace

std::vector<std::string> episode_labels(const Scenario& s) {
    std::vector<std::string> labels;
    std::map<std::string, int> seen;
    for (const auto& ev : s.script) {
        auto label = ev.label.empty() ? std::string(action_name(ev.action)) + ":" + subject_of(ev.action) : ev.label;
        const int n = ++seen[label];
        if (n > 1) label += "#" + std::to_string(n);
        labels.push_back(std::move(label));
    }
    return labels;
}

void validate(const Scenario& s) {
    if (s.name.empty()) fail("scenario name is empty");
    if (s.repeat < 1) fail("repeat must be at least 1");
    if (s.central.n_probes < 1) fail("central.n_probes must be at least 1");
    if (s.dhcp.pool_size < 1) fail("dhcp.pool_size must be at least 1");
    if (s.default_policy.delay < 1) fail("default_policy.delay must be at least 1");
    if (s.default_policy.p_drop < 0.0 || s.default_policy.p_drop > 1.0) fail("default_policy.p_drop must be in [0,1]");
    // A probe and its answer must both fit inside the check window.
    if (s.central.check_timeout <= 2 * s.default_policy.delay) {
        fail("central.check_timeout must exceed twice the default delay");
    }
    if (s.expect.monte_carlo && s.repeat < 2) fail("a Monte Carlo expectation needs repeat > 1");

    std::set<std::string> names{"central", "dhcp", "attacker"};
    std::set<wire::MacAddr> macs{s.dhcp_mac};
    if (s.mode == Mode::Secure) macs.insert(s.central_mac);
    if (s.mode == Mode::Secure && s.central_mac == s.dhcp_mac) fail("central and dhcp MACs collide");
    if (s.attacker && !macs.insert(s.attacker_mac).second) fail("attacker MAC collides");
    for (std::size_t i = 0; i < s.hosts.size(); ++i) {
        const auto& h = s.hosts[i];
        if (h.name.empty()) fail("host " + std::to_string(i) + " has no name");
        if (!names.insert(h.name).second) fail("duplicate or reserved node name: " + h.name);
        const auto mac = h.mac.value_or(default_host_mac(i));
        if (mac.is_broadcast() || !macs.insert(mac).second) fail("MAC of host " + h.name + " collides");
    }

    auto is_host = [&](const std::string& n) {
        return std::any_of(s.hosts.begin(), s.hosts.end(), [&](const HostSpec& h) { return h.name == n; });
    };
    auto need_host = [&](const std::string& n, std::size_t i) {
        if (!is_host(n)) fail("script[" + std::to_string(i) + "] names unknown host '" + n + "'");
    };
    auto need_host_or_ip = [&](const std::string& n, std::size_t i) {
        if (!is_host(n) && !is_ip_literal(n)) {
            fail("script[" + std::to_string(i) + "]: '" + n + "' is neither a host nor an IPv4 address");
        }
    };

    std::set<std::string> changed;
    Tick last = 0;
    for (std::size_t i = 0; i < s.script.size(); ++i) {
        const auto& ev = s.script[i];
        if (ev.at < last) fail("script times must be nondecreasing (script[" + std::to_string(i) + "])");
        last = ev.at;
        if (ev.at > s.max_time) fail("script[" + std::to_string(i) + "] is scheduled after max_time");
        if (is_attack(ev.action) && !s.attacker) fail("script[" + std::to_string(i) + "] needs \"attacker\": true");

        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, JoinAction> || std::is_same_v<T, RenewAction>) {
                    need_host(a.host, i);
                } else if constexpr (std::is_same_v<T, ResolveAction>) {
                    need_host(a.host, i);
                    need_host_or_ip(a.target, i);
                } else if constexpr (std::is_same_v<T, ChangeMacAction>) {
                    need_host(a.host, i);
                    if (a.new_mac && (a.new_mac->is_broadcast() || macs.count(*a.new_mac))) {
                        fail("script[" + std::to_string(i) + "]: new MAC collides");
                    }
                    changed.insert(a.host);
                } else if constexpr (std::is_same_v<T, SpoofMappingAction>) {
                    need_host_or_ip(a.victim, i);
                } else if constexpr (std::is_same_v<T, RaceOldMacAction>) {
                    need_host(a.victim, i);
                    if (!changed.count(a.victim)) {
                        fail("script[" + std::to_string(i) + "]: race_old_mac needs an earlier change_mac of " +
                             a.victim);
                    }
                } else if constexpr (std::is_same_v<T, DosFloodCentralAction>) {
                    need_host_or_ip(a.claimed, i);
                    if (a.interval < 1) fail("script[" + std::to_string(i) + "]: interval must be at least 1");
                } else if constexpr (std::is_same_v<T, DosVictimAction>) {
                    need_host(a.victim, i);
                    if (a.delivery_probability < 0.0 || a.delivery_probability > 1.0) {
                        fail("script[" + std::to_string(i) + "]: delivery_probability must be in [0,1]");
                    }
                } else if constexpr (std::is_same_v<T, SetPolicyAction>) {
                    if (!names.count(a.node)) fail("script[" + std::to_string(i) + "] names unknown node '" + a.node + "'");
                    if ((a.node == "central" && s.mode != Mode::Secure) || (a.node == "attacker" && !s.attacker)) {
                        fail("script[" + std::to_string(i) + "]: node '" + a.node + "' is absent");
                    }
                    if (a.policy.delay < 1) fail("script[" + std::to_string(i) + "]: delay must be at least 1");
                    if (a.policy.p_drop < 0.0 || a.policy.p_drop > 1.0) {
                        fail("script[" + std::to_string(i) + "]: p_drop must be in [0,1]");
                    }
                } else if constexpr (std::is_same_v<T, DropNextAction>) {
                    if (!names.count(a.node)) fail("script[" + std::to_string(i) + "] names unknown node '" + a.node + "'");
                    if ((a.node == "central" && s.mode != Mode::Secure) || (a.node == "attacker" && !s.attacker)) {
                        fail("script[" + std::to_string(i) + "]: node '" + a.node + "' is absent");
                    }
                }
            },
            ev.action);
    }

    const auto labels = episode_labels(s);
    for (const auto& [label, count] : s.expect.messages) {
        (void)count;
        if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
            fail("expected message count for unknown episode '" + label + "'");
        }
    }
    for (const auto& [host, outcome] : s.expect.change_outcomes) {
        (void)outcome;
        if (!is_host(host)) fail("expected change outcome for unknown host '" + host + "'");
    }
}

// ---- JSON -----------------------------------------------------------------

namespace {

template <class T>
T get(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(where + ": field '" + key + "' has the wrong type");
    }
}

template <class T>
void get_opt(const json& j, const char* key, T& out, const std::string& where) {
    if (j.contains(key)) out = get<T>(j, key, where);
}

wire::MacAddr mac_field(const json& j, const char* key, const std::string& where) {
    const auto s = get<std::string>(j, key, where);
    const auto mac = wire::MacAddr::parse(s);
    if (!mac) fail(where + ": '" + s + "' is not a MAC address");
    return *mac;
}

wire::Ipv4Addr ip_field(const json& j, const char* key, const std::string& where) {
    const auto s = get<std::string>(j, key, where);
    const auto ip = wire::Ipv4Addr::parse(s);
    if (!ip) fail(where + ": '" + s + "' is not an IPv4 address");
    return *ip;
}

json policy_json(const simnet::DeliveryPolicy& p) { return {{"p_drop", p.p_drop}, {"delay", p.delay}}; }

simnet::DeliveryPolicy policy_from(const json& j, const std::string& where) {
    simnet::DeliveryPolicy p;
    get_opt(j, "p_drop", p.p_drop, where);
    get_opt(j, "delay", p.delay, where);
    return p;
}

json action_json(const Action& action) {
    json j;
    j["action"] = action_name(action);
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, JoinAction> || std::is_same_v<T, RenewAction>) {
                j["host"] = a.host;
            } else if constexpr (std::is_same_v<T, ResolveAction>) {
                j["host"] = a.host;
                j["target"] = a.target;
            } else if constexpr (std::is_same_v<T, ChangeMacAction>) {
                j["host"] = a.host;
                if (a.new_mac) j["new_mac"] = a.new_mac->to_string();
            } else if constexpr (std::is_same_v<T, SpoofMappingAction> || std::is_same_v<T, RaceOldMacAction>) {
                j["victim"] = a.victim;
            } else if constexpr (std::is_same_v<T, DosFloodCentralAction>) {
                j["claimed"] = a.claimed;
                j["interval"] = a.interval;
                j["duration"] = a.duration;
            } else if constexpr (std::is_same_v<T, DosVictimAction>) {
                j["victim"] = a.victim;
                j["delivery_probability"] = a.delivery_probability;
            } else if constexpr (std::is_same_v<T, SetPolicyAction>) {
                j["node"] = a.node;
                j["p_drop"] = a.policy.p_drop;
                j["delay"] = a.policy.delay;
            } else if constexpr (std::is_same_v<T, DropNextAction>) {
                j["node"] = a.node;
                j["count"] = a.count;
            }
        },
        action);
    return j;
}

Action action_from(const json& j, const std::string& where) {
    const auto kind = get<std::string>(j, "action", where);
    if (kind == "join") return JoinAction{get<std::string>(j, "host", where)};
    if (kind == "renew") return RenewAction{get<std::string>(j, "host", where)};
    if (kind == "resolve") return ResolveAction{get<std::string>(j, "host", where), get<std::string>(j, "target", where)};
    if (kind == "change_mac") {
        ChangeMacAction a{get<std::string>(j, "host", where), std::nullopt};
        if (j.contains("new_mac")) a.new_mac = mac_field(j, "new_mac", where);
        return a;
    }
    if (kind == "spoof_mapping") return SpoofMappingAction{get<std::string>(j, "victim", where)};
    if (kind == "race_old_mac") return RaceOldMacAction{get<std::string>(j, "victim", where)};
    if (kind == "dos_flood_central") {
        DosFloodCentralAction a{get<std::string>(j, "claimed", where)};
        get_opt(j, "interval", a.interval, where);
        get_opt(j, "duration", a.duration, where);
        return a;
    }
    if (kind == "dos_victim") {
        DosVictimAction a{get<std::string>(j, "victim", where)};
        get_opt(j, "delivery_probability", a.delivery_probability, where);
        return a;
    }
    if (kind == "set_policy") return SetPolicyAction{get<std::string>(j, "node", where), policy_from(j, where)};
    if (kind == "drop_next") {
        DropNextAction a{get<std::string>(j, "node", where)};
        get_opt(j, "count", a.count, where);
        return a;
    }
    fail(where + ": unknown action '" + kind + "'");
}

}  // namespace

json to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["family"] = s.family;
    j["mode"] = protocol::to_string(s.mode);
    j["seed"] = s.seed;
    j["repeat"] = s.repeat;
    j["max_time"] = s.max_time;
    j["central"] = {{"n_probes", s.central.n_probes},
                    {"check_timeout", s.central.check_timeout},
                    {"rate_limit", s.central.rate_limit},
                    {"rate_window", s.central.rate_window}};
    j["host"] = {{"join_timeout", s.host.join_timeout},
                 {"resolve_timeout", s.host.resolve_timeout},
                 {"change_retry_timeout", s.host.change_retry_timeout},
                 {"max_change_retries", s.host.max_change_retries ? json(*s.host.max_change_retries) : json(nullptr)}};
    j["dhcp"] = {{"pool_first", s.dhcp.pool_first.to_string()},
                 {"pool_size", s.dhcp.pool_size},
                 {"ip_send_timeout", s.dhcp.ip_send_timeout},
                 {"ip_send_max_retries", s.dhcp.ip_send_max_retries}};
    j["default_policy"] = policy_json(s.default_policy);
    j["central_mac"] = s.central_mac.to_string();
    j["dhcp_mac"] = s.dhcp_mac.to_string();
    j["attacker"] = s.attacker;
    j["attacker_mac"] = s.attacker_mac.to_string();
    j["hosts"] = json::array();
    for (const auto& h : s.hosts) {
        json hj{{"name", h.name}};
        if (h.mac) hj["mac"] = h.mac->to_string();
        j["hosts"].push_back(hj);
    }
    j["script"] = json::array();
    for (const auto& ev : s.script) {
        auto ej = action_json(ev.action);
        ej["at"] = ev.at;
        if (!ev.label.empty()) ej["label"] = ev.label;
        j["script"].push_back(ej);
    }
    json e = json::object();
    if (!s.expect.messages.empty()) e["messages"] = s.expect.messages;
    if (s.expect.verdict) e["verdict"] = to_string(*s.expect.verdict);
    if (!s.expect.change_outcomes.empty()) {
        json co = json::object();
        for (const auto& [h, o] : s.expect.change_outcomes) co[h] = protocol::to_string(o);
        e["change_outcomes"] = co;
    }
    if (s.expect.monte_carlo) {
        e["monte_carlo"] = {{"probability", s.expect.monte_carlo->probability},
                            {"tolerance", s.expect.monte_carlo->tolerance}};
    }
    j["expect"] = e;
    return j;
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) fail("scenario must be a JSON object");
    Scenario s;
    s.name = get<std::string>(j, "name", "scenario");
    s.family = s.name;
    get_opt(j, "family", s.family, "scenario");
    if (j.contains("mode")) {
        const auto m = parse_mode(get<std::string>(j, "mode", "scenario"));
        if (!m) fail("scenario: mode must be \"secure\" or \"baseline\"");
        s.mode = *m;
    }
    get_opt(j, "seed", s.seed, "scenario");
    get_opt(j, "repeat", s.repeat, "scenario");
    get_opt(j, "max_time", s.max_time, "scenario");

    if (j.contains("central")) {
        const auto& c = j.at("central");
        get_opt(c, "n_probes", s.central.n_probes, "central");
        get_opt(c, "check_timeout", s.central.check_timeout, "central");
        get_opt(c, "rate_limit", s.central.rate_limit, "central");
        get_opt(c, "rate_window", s.central.rate_window, "central");
    }
    if (j.contains("host")) {
        const auto& h = j.at("host");
        get_opt(h, "join_timeout", s.host.join_timeout, "host");
        get_opt(h, "resolve_timeout", s.host.resolve_timeout, "host");
        get_opt(h, "change_retry_timeout", s.host.change_retry_timeout, "host");
        if (h.contains("max_change_retries")) {
            if (h.at("max_change_retries").is_null()) {
                s.host.max_change_retries.reset();
            } else {
                s.host.max_change_retries = get<std::uint32_t>(h, "max_change_retries", "host");
            }
        }
    }
    if (j.contains("dhcp")) {
        const auto& d = j.at("dhcp");
        if (d.contains("pool_first")) s.dhcp.pool_first = ip_field(d, "pool_first", "dhcp");
        get_opt(d, "pool_size", s.dhcp.pool_size, "dhcp");
        get_opt(d, "ip_send_timeout", s.dhcp.ip_send_timeout, "dhcp");
        get_opt(d, "ip_send_max_retries", s.dhcp.ip_send_max_retries, "dhcp");
    }
    if (j.contains("default_policy")) s.default_policy = policy_from(j.at("default_policy"), "default_policy");
    if (j.contains("central_mac")) s.central_mac = mac_field(j, "central_mac", "scenario");
    if (j.contains("dhcp_mac")) s.dhcp_mac = mac_field(j, "dhcp_mac", "scenario");
    if (j.contains("attacker_mac")) s.attacker_mac = mac_field(j, "attacker_mac", "scenario");
    get_opt(j, "attacker", s.attacker, "scenario");

    if (j.contains("hosts")) {
        const auto& hosts = j.at("hosts");
        if (!hosts.is_array()) fail("scenario: hosts must be an array");
        for (std::size_t i = 0; i < hosts.size(); ++i) {
            const auto where = "hosts[" + std::to_string(i) + "]";
            HostSpec h{get<std::string>(hosts[i], "name", where), std::nullopt};
            if (hosts[i].contains("mac")) h.mac = mac_field(hosts[i], "mac", where);
            s.hosts.push_back(std::move(h));
        }
    }
    if (j.contains("script")) {
        const auto& script = j.at("script");
        if (!script.is_array()) fail("scenario: script must be an array");
        for (std::size_t i = 0; i < script.size(); ++i) {
            const auto where = "script[" + std::to_string(i) + "]";
            ScriptEvent ev;
            ev.at = get<Tick>(script[i], "at", where);
            ev.action = action_from(script[i], where);
            get_opt(script[i], "label", ev.label, where);
            s.script.push_back(std::move(ev));
        }
    }
    if (j.contains("expect")) {
        const auto& e = j.at("expect");
        get_opt(e, "messages", s.expect.messages, "expect");
        if (e.contains("verdict")) {
            const auto v = parse_verdict(get<std::string>(e, "verdict", "expect"));
            if (!v) fail("expect: unknown verdict");
            s.expect.verdict = *v;
        }
        if (e.contains("change_outcomes")) {
            for (const auto& [h, o] : get<std::map<std::string, std::string>>(e, "change_outcomes", "expect")) {
                const auto outcome = parse_change_outcome(o);
                if (!outcome) fail("expect.change_outcomes: unknown outcome '" + o + "'");
                s.expect.change_outcomes[h] = *outcome;
            }
        }
        if (e.contains("monte_carlo")) {
            const auto& mc = e.at("monte_carlo");
            s.expect.monte_carlo = MonteCarloTarget{get<double>(mc, "probability", "expect.monte_carlo"),
                                                    get<double>(mc, "tolerance", "expect.monte_carlo")};
        }
    }
    return s;
}

}  // namespace csarp::scenarios
