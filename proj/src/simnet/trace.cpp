#include "csarp/simnet/trace.hpp"

#include <ostream>
#include <unordered_set>

namespace csarp::simnet {

std::size_t Trace::message_count() const {
    std::unordered_set<std::uint64_t> sends;
    for (const auto& e : entries_) sends.insert(e.send_id);
    return sends.size();
}

std::size_t Trace::message_count(EpisodeId episode) const {
    std::unordered_set<std::uint64_t> sends;
    for (const auto& e : entries_) {
        if (e.episode == episode) sends.insert(e.send_id);
    }
    return sends.size();
}

void write_trace(std::ostream& out, const Trace& trace, const std::vector<std::string>& names) {
    auto label = [&](NodeId id) {
        const auto i = to_index(id);
        return i < names.size() && !names[i].empty() ? names[i] : std::to_string(i);
    };
    for (const auto& e : trace.entries()) {
        out << e.time << ' ' << label(e.src) << ' ' << e.dest.to_string() << ' '
            << (e.recipient ? label(*e.recipient) : std::string("-")) << ' ' << e.kind << ' '
            << (e.disposition == Disposition::Delivered ? "delivered" : "dropped") << " ep=" << e.episode
            << " send=" << e.send_id << '\n';
    }
}

}  // namespace csarp::simnet
