#include "csarp/scenarios/report.hpp"

#include <cstdio>
#include <ostream>
#include <set>

namespace csarp::scenarios {

using nlohmann::json;

std::map<simnet::EpisodeId, std::size_t> recount(const simnet::Trace& trace) {
    std::map<simnet::EpisodeId, std::set<std::uint64_t>> sends;
    for (const auto& e : trace.entries()) sends[e.episode].insert(e.send_id);
    std::map<simnet::EpisodeId, std::size_t> out;
    for (const auto& [ep, ids] : sends) out[ep] = ids.size();
    return out;
}

std::vector<ComparisonRow> compare(const Report& secure, const Report& baseline) {
    if (secure.family != baseline.family) {
        throw MismatchedScenario("cannot compare '" + secure.family + "' with '" + baseline.family + "'");
    }
    if (secure.mode != Mode::Secure || baseline.mode != Mode::Baseline) {
        throw MismatchedScenario("comparison needs one secure and one baseline report");
    }
    if (secure.episodes.size() != baseline.episodes.size()) {
        throw MismatchedScenario("episode lists differ in length");
    }
    std::vector<ComparisonRow> rows;
    for (std::size_t i = 0; i < secure.episodes.size(); ++i) {
        const auto& a = secure.episodes[i];
        const auto& b = baseline.episodes[i];
        if (a.label != b.label) throw MismatchedScenario("episode '" + a.label + "' vs '" + b.label + "'");
        rows.push_back({a.label, a.messages, b.messages});
    }
    return rows;
}

namespace {

json binding_table(const std::map<wire::Ipv4Addr, wire::MacAddr>& table) {
    json j = json::object();
    for (const auto& [ip, mac] : table) j[ip.to_string()] = mac.to_string();
    return j;
}

}  // namespace

json to_json(const Report& r) {
    json j;
    j["scenario"] = r.scenario;
    j["family"] = r.family;
    j["mode"] = protocol::to_string(r.mode);
    j["seed"] = r.seed;
    j["end_time"] = r.end_time;
    j["episodes"] = json::array();
    for (const auto& ep : r.episodes) {
        j["episodes"].push_back(
            {{"id", ep.id}, {"label", ep.label}, {"at", ep.at}, {"messages", ep.messages}, {"by_kind", ep.by_kind}});
    }
    j["total_messages"] = r.total_messages;
    j["table"] = r.table ? binding_table(*r.table) : json(nullptr);
    j["central_events"] = r.central_events;
    j["hosts"] = json::array();
    for (const auto& h : r.hosts) {
        j["hosts"].push_back({{"name", h.name},
                              {"mac", h.mac.to_string()},
                              {"ip", h.ip ? json(h.ip->to_string()) : json(nullptr)},
                              {"arp_cache", binding_table(h.arp_cache)},
                              {"joins_completed", h.joins_completed},
                              {"change_outcome", protocol::to_string(h.change_outcome)},
                              {"change_attempts", h.change_attempts},
                              {"saw_no_change", h.saw_no_change},
                              {"rejected_frames", h.rejected_frames}});
    }
    j["verdict"] = to_string(r.verdict);
    j["forged_ever"] = r.forged_ever;
    if (r.monte_carlo) {
        const auto& mc = *r.monte_carlo;
        json verdicts = json::object();
        for (const auto& [v, n] : mc.verdicts) verdicts[to_string(v)] = n;
        j["monte_carlo"] = {{"trials", mc.trials},
                            {"blocked", mc.blocked},
                            {"estimate", mc.estimate},
                            {"std_error", mc.std_error},
                            {"verdicts", verdicts}};
    } else {
        j["monte_carlo"] = nullptr;
    }
    j["trace_entries"] = r.trace.size();
    j["passed"] = r.passed();
    j["failures"] = r.failures;
    return j;
}

void write_table(std::ostream& out, const Report& r) {
    char line[256];
    out << "scenario " << r.scenario << " (" << protocol::to_string(r.mode) << ", seed " << r.seed << ")\n";
    std::snprintf(line, sizeof line, "  %-24s %8s %9s  %s\n", "episode", "at", "messages", "by kind");
    out << line;
    for (const auto& ep : r.episodes) {
        std::string kinds;
        for (const auto& [k, n] : ep.by_kind) kinds += (kinds.empty() ? "" : " ") + k + "=" + std::to_string(n);
        std::snprintf(line, sizeof line, "  %-24s %8llu %9zu  ", ep.label.c_str(),
                      static_cast<unsigned long long>(ep.at), ep.messages);
        out << line << kinds << '\n';
    }
    out << "  total messages " << r.total_messages << ", finished at t=" << r.end_time << '\n';
    if (r.table) {
        out << "  central table:";
        if (r.table->empty()) out << " (empty)";
        out << '\n';
        for (const auto& [ip, mac] : *r.table) out << "    " << ip.to_string() << " -> " << mac.to_string() << '\n';
    }
    for (const auto& h : r.hosts) {
        out << "  host " << h.name << " " << h.mac.to_string() << " ip=" << (h.ip ? h.ip->to_string() : "-");
        if (h.change_outcome != protocol::ChangeOutcome::None) {
            out << " change=" << protocol::to_string(h.change_outcome) << " attempts=" << h.change_attempts;
        }
        out << '\n';
        for (const auto& [ip, mac] : h.arp_cache) out << "    " << ip.to_string() << " -> " << mac.to_string() << '\n';
    }
    out << "  verdict " << to_string(r.verdict) << '\n';
    if (r.monte_carlo) {
        const auto& mc = *r.monte_carlo;
        std::snprintf(line, sizeof line, "  monte carlo: blocked %u/%u = %.5f (std error %.5f)\n", mc.blocked,
                      mc.trials, mc.estimate, mc.std_error);
        out << line;
    }
    if (r.passed()) {
        out << "  expectations met\n";
    } else {
        for (const auto& f : r.failures) out << "  FAILED " << f << '\n';
    }
}

void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-24s %8s %9s %7s\n", "episode", "secure", "baseline", "delta");
    out << line;
    for (const auto& row : rows) {
        std::snprintf(line, sizeof line, "  %-24s %8zu %9zu %+7lld\n", row.label.c_str(), row.secure, row.baseline,
                      row.delta());
        out << line;
    }
}

}  // namespace csarp::scenarios
