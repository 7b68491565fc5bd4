#pragma once

#include "csarp/protocol/config.hpp"
#include "csarp/protocol/host.hpp"
#include "csarp/simnet/simulation.hpp"
#include "csarp/wire/addr.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace csarp::scenarios {

using protocol::Mode;
using simnet::Tick;

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Verdict { NotApplicable, Blocked, BlockedWithRecovery, Succeeded };

const char* to_string(Verdict v) noexcept;
std::optional<Verdict> parse_verdict(std::string_view s);
std::optional<Mode> parse_mode(std::string_view s);
std::optional<protocol::ChangeOutcome> parse_change_outcome(std::string_view s);

struct HostSpec {
    std::string name;
    std::optional<wire::MacAddr> mac;  // default: assigned in declaration order
};

// Targets naming an address accept a host name (its address when the action
// runs) or a dotted-quad literal.
struct JoinAction {
    std::string host;
};
struct ResolveAction {
    std::string host;
    std::string target;
};
struct ChangeMacAction {
    std::string host;
    std::optional<wire::MacAddr> new_mac;  // default: a fresh locally administered MAC
};
struct RenewAction {
    std::string host;
};
struct SpoofMappingAction {
    std::string victim;
};
// Binds the attacker to the MAC the victim held before its latest change.
struct RaceOldMacAction {
    std::string victim;
};
struct DosFloodCentralAction {
    std::string claimed;
    Tick interval = 1;
    Tick duration = 0;
};
struct DosVictimAction {
    std::string victim;
    double delivery_probability = 0.1;
};
struct SetPolicyAction {
    std::string node;
    simnet::DeliveryPolicy policy;
};
struct DropNextAction {
    std::string node;
    std::uint32_t count = 1;
};

using Action = std::variant<JoinAction, ResolveAction, ChangeMacAction, RenewAction, SpoofMappingAction,
                            RaceOldMacAction, DosFloodCentralAction, DosVictimAction, SetPolicyAction,
                            DropNextAction>;

// The JSON "action" value, e.g. "change_mac".
const char* action_name(const Action& a) noexcept;
bool is_attack(const Action& a) noexcept;

struct ScriptEvent {
    Tick at = 0;
    Action action;
    std::string label;  // empty: derived from the action
};

struct MonteCarloTarget {
    double probability = 0.0;
    double tolerance = 0.0;
};

struct Expectations {
    std::map<std::string, std::size_t> messages;  // episode label -> exact count
    std::optional<Verdict> verdict;
    std::map<std::string, protocol::ChangeOutcome> change_outcomes;  // host -> final outcome
    std::optional<MonteCarloTarget> monte_carlo;                     // fraction of trials blocked
};

struct Scenario {
    std::string name;
    std::string family;  // scenarios in one family are comparable across modes
    Mode mode = Mode::Secure;
    std::uint64_t seed = 1;
    std::uint32_t repeat = 1;
    Tick max_time = 100000;

    protocol::CentralConfig central;
    protocol::HostConfig host;
    protocol::DhcpConfig dhcp;
    simnet::DeliveryPolicy default_policy;

    wire::MacAddr central_mac = wire::MacAddr::local(0x01);
    wire::MacAddr dhcp_mac = wire::MacAddr::local(0x02);
    wire::MacAddr attacker_mac = wire::MacAddr::local(0x66);
    std::vector<HostSpec> hosts;
    bool attacker = false;

    std::vector<ScriptEvent> script;
    Expectations expect;
};

// Host i gets this MAC unless one is given.
wire::MacAddr default_host_mac(std::size_t index);

// Throws ValidationError naming the first problem.
void validate(const Scenario& s);

// Episode labels in script order; unlabeled events become "action:subject",
// with "#n" appended to repeats.
std::vector<std::string> episode_labels(const Scenario& s);

nlohmann::json to_json(const Scenario& s);
// Throws ValidationError on missing or mistyped fields. Does not call validate().
Scenario scenario_from_json(const nlohmann::json& j);

}  // namespace csarp::scenarios
