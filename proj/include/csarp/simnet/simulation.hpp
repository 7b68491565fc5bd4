#pragma once

#include "csarp/simnet/trace.hpp"
#include "csarp/wire/addr.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace csarp::simnet {

enum class SimErrc { DuplicateMac, UnknownNode, TimeLimitExceeded };

class SimError : public std::runtime_error {
public:
    SimError(SimErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    SimErrc code() const noexcept { return code_; }

private:
    SimErrc code_;
};

struct DeliveryPolicy {
    double p_drop = 0.0;
    Tick delay = 1;
};

class Simulation;

// A node's behaviour. The simulation owns every node; nodes talk to each
// other only through frames.
class Node {
public:
    virtual ~Node() = default;

    // Called for frames addressed to this node's MAC and for broadcasts.
    virtual void on_frame(std::span<const std::uint8_t> bytes) = 0;
    virtual void on_timer(std::uint64_t /*token*/) {}
    // Called once the node has an id and a MAC.
    virtual void on_attached() {}

    NodeId id() const noexcept { return id_; }
    const std::string& name() const noexcept { return name_; }
    wire::MacAddr mac() const;

protected:
    Simulation& sim() const noexcept { return *sim_; }
    Tick now() const;
    void send(std::vector<std::uint8_t> bytes);
    void schedule(Tick delay, std::uint64_t token);

private:
    friend class Simulation;
    Simulation* sim_ = nullptr;
    NodeId id_{};
    std::string name_;
};

class Simulation {
public:
    explicit Simulation(std::uint64_t seed);
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    NodeId register_node(wire::MacAddr mac, std::unique_ptr<Node> node, std::string name = {});

    template <class T, class... Args>
    T& emplace_node(wire::MacAddr mac, std::string name, Args&&... args) {
        auto node = std::make_unique<T>(std::forward<Args>(args)...);
        T& ref = *node;
        register_node(mac, std::move(node), std::move(name));
        return ref;
    }

    // Moves a node to a new MAC; frames to the old MAC then reach nobody.
    void rebind_mac(NodeId node, wire::MacAddr new_mac);
    wire::MacAddr mac_of(NodeId node) const;
    std::optional<NodeId> owner_of(const wire::MacAddr& mac) const;
    Node& node(NodeId id);
    const Node& node(NodeId id) const;
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::vector<std::string> node_names() const;

    void send(NodeId from, std::vector<std::uint8_t> bytes);
    void schedule_timer(NodeId node, Tick delay, std::uint64_t token);
    // Script hook: runs fn at absolute time `at`, attributing its traffic to `episode`.
    void schedule_action(Tick at, std::function<void()> fn, EpisodeId episode = kNoEpisode);

    void set_default_policy(DeliveryPolicy policy) { default_policy_ = policy; }
    void set_policy(NodeId dest, DeliveryPolicy policy);
    const DeliveryPolicy& policy_for(NodeId dest) const;
    // Deterministically drops the next `count` frames addressed to `dest`.
    void drop_next(NodeId dest, std::uint32_t count);

    // Called after every processed event.
    void set_observer(std::function<void()> observer) { observer_ = std::move(observer); }

    // Processes one event; false when the queue is empty.
    bool step();
    // Runs until the queue drains. Throws SimError(TimeLimitExceeded) if an
    // event is still pending beyond max_time.
    Tick run_until_quiescent(Tick max_time);

    Tick now() const noexcept { return now_; }
    EpisodeId current_episode() const noexcept { return current_episode_; }
    std::mt19937_64& rng() noexcept { return rng_; }
    const Trace& trace() const noexcept { return trace_; }

private:
    struct Delivery {
        NodeId to;
        std::shared_ptr<const std::vector<std::uint8_t>> bytes;
    };
    struct Timer {
        NodeId node;
        std::uint64_t token;
    };
    struct Action {
        std::function<void()> fn;
    };
    struct Event {
        Tick time;
        std::uint64_t seq;
        EpisodeId episode;
        std::variant<Delivery, Timer, Action> what;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };

    void push(Tick time, std::variant<Delivery, Timer, Action> what);
    void offer(NodeId from, std::uint64_t send_id, const wire::MacAddr& dest, NodeId to, const std::string& kind,
               const std::shared_ptr<const std::vector<std::uint8_t>>& bytes);
    NodeId check(NodeId id) const;

    std::vector<std::unique_ptr<Node>> nodes_;
    std::vector<wire::MacAddr> macs_;
    std::unordered_map<wire::MacAddr, NodeId> owners_;
    std::map<std::uint32_t, DeliveryPolicy> policies_;
    std::map<std::uint32_t, std::uint32_t> forced_drops_;
    DeliveryPolicy default_policy_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_send_ = 0;
    Tick now_ = 0;
    EpisodeId current_episode_ = kNoEpisode;
    std::mt19937_64 rng_;
    Trace trace_;
    std::function<void()> observer_;
};

}  // namespace csarp::simnet
