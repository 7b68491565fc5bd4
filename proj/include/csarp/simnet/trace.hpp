#pragma once

#include "csarp/wire/addr.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace csarp::simnet {

using Tick = std::uint64_t;
using EpisodeId = std::uint32_t;

// 0 means "not attributed to any episode".
inline constexpr EpisodeId kNoEpisode = 0;

enum class NodeId : std::uint32_t {};

inline std::uint32_t to_index(NodeId id) noexcept { return static_cast<std::uint32_t>(id); }

enum class Disposition { Delivered, Dropped };

struct TraceEntry {
    Tick time = 0;
    std::uint64_t send_id = 0;  // shared by all recipients of one broadcast
    NodeId src{};
    wire::MacAddr dest;
    std::optional<NodeId> recipient;  // empty when no node owns dest
    std::string kind;
    Disposition disposition = Disposition::Delivered;
    EpisodeId episode = kNoEpisode;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

class Trace {
public:
    void append(TraceEntry entry) { entries_.push_back(std::move(entry)); }
    const std::vector<TraceEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    // Number of distinct sends, which is how protocol transactions are counted.
    std::size_t message_count() const;
    std::size_t message_count(EpisodeId episode) const;

    friend bool operator==(const Trace&, const Trace&) = default;

private:
    std::vector<TraceEntry> entries_;
};

// One line per entry: time src dest recipient kind disposition episode send_id.
// names[i] labels NodeId i; missing names print as the numeric id.
void write_trace(std::ostream& out, const Trace& trace, const std::vector<std::string>& names);

}  // namespace csarp::simnet
