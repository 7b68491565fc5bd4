#pragma once

#include "csarp/scenarios/scenario.hpp"
#include "csarp/simnet/trace.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csarp::scenarios {

struct EpisodeReport {
    simnet::EpisodeId id = 0;
    std::string label;
    Tick at = 0;
    std::size_t messages = 0;                     // distinct sends
    std::map<std::string, std::size_t> by_kind;  // distinct sends per frame kind
};

struct HostReport {
    std::string name;
    wire::MacAddr mac;
    std::optional<wire::Ipv4Addr> ip;
    std::map<wire::Ipv4Addr, wire::MacAddr> arp_cache;
    std::uint32_t joins_completed = 0;
    protocol::ChangeOutcome change_outcome = protocol::ChangeOutcome::None;
    std::uint32_t change_attempts = 0;
    bool saw_no_change = false;
    std::uint32_t rejected_frames = 0;
};

struct MonteCarloSummary {
    std::uint32_t trials = 0;
    std::uint32_t blocked = 0;  // trials whose verdict is BLOCKED or BLOCKED-WITH-RECOVERY
    double estimate = 0.0;
    double std_error = 0.0;
    std::map<Verdict, std::uint32_t> verdicts;
};

// Results of one scenario run. With repeat > 1 every field but monte_carlo
// describes the first trial.
struct Report {
    std::string scenario;
    std::string family;
    Mode mode = Mode::Secure;
    std::uint64_t seed = 0;
    Tick end_time = 0;

    std::vector<EpisodeReport> episodes;
    std::size_t total_messages = 0;
    std::optional<std::map<wire::Ipv4Addr, wire::MacAddr>> table;  // secure mode only
    std::map<std::string, std::size_t> central_events;
    std::vector<HostReport> hosts;

    Verdict verdict = Verdict::NotApplicable;
    bool forged_ever = false;  // a binding no host ever held appeared in a table or cache
    std::optional<MonteCarloSummary> monte_carlo;

    std::vector<std::string> failures;  // unmet expectations
    bool passed() const noexcept { return failures.empty(); }

    simnet::Trace trace;
    std::vector<std::string> node_names;
};

class MismatchedScenario : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ComparisonRow {
    std::string label;
    std::size_t secure = 0;
    std::size_t baseline = 0;
    long long delta() const noexcept { return static_cast<long long>(secure) - static_cast<long long>(baseline); }
};

// Side-by-side episode counts. Throws MismatchedScenario unless both reports
// come from one family, one in each mode, with the same episodes.
std::vector<ComparisonRow> compare(const Report& secure, const Report& baseline);

// Episode counts recomputed from the raw trace, keyed by episode id.
std::map<simnet::EpisodeId, std::size_t> recount(const simnet::Trace& trace);

nlohmann::json to_json(const Report& r);
void write_table(std::ostream& out, const Report& r);
void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace csarp::scenarios
