#include "csarp/simnet/simulation.hpp"

#include "csarp/wire/dhcp_lite.hpp"

namespace csarp::simnet {

wire::MacAddr Node::mac() const { return sim_->mac_of(id_); }
Tick Node::now() const { return sim_->now(); }
void Node::send(std::vector<std::uint8_t> bytes) { sim_->send(id_, std::move(bytes)); }
void Node::schedule(Tick delay, std::uint64_t token) { sim_->schedule_timer(id_, delay, token); }

Simulation::Simulation(std::uint64_t seed) : rng_(seed) {}

NodeId Simulation::register_node(wire::MacAddr mac, std::unique_ptr<Node> node, std::string name) {
    if (mac.is_broadcast()) throw SimError(SimErrc::DuplicateMac, "broadcast address cannot be a node address");
    if (owners_.count(mac)) throw SimError(SimErrc::DuplicateMac, "MAC already bound: " + mac.to_string());
    const NodeId id{static_cast<std::uint32_t>(nodes_.size())};
    node->sim_ = this;
    node->id_ = id;
    node->name_ = name.empty() ? "node" + std::to_string(to_index(id)) : std::move(name);
    nodes_.push_back(std::move(node));
    macs_.push_back(mac);
    owners_.emplace(mac, id);
    nodes_.back()->on_attached();
    return id;
}

NodeId Simulation::check(NodeId id) const {
    if (to_index(id) >= nodes_.size()) throw SimError(SimErrc::UnknownNode, "no such node");
    return id;
}

void Simulation::rebind_mac(NodeId node, wire::MacAddr new_mac) {
    check(node);
    auto& current = macs_[to_index(node)];
    if (current == new_mac) return;
    if (new_mac.is_broadcast() || owners_.count(new_mac)) {
        throw SimError(SimErrc::DuplicateMac, "MAC already bound: " + new_mac.to_string());
    }
    owners_.erase(current);
    owners_.emplace(new_mac, node);
    current = new_mac;
}

wire::MacAddr Simulation::mac_of(NodeId node) const { return macs_[to_index(check(node))]; }

std::optional<NodeId> Simulation::owner_of(const wire::MacAddr& mac) const {
    const auto it = owners_.find(mac);
    if (it == owners_.end()) return std::nullopt;
    return it->second;
}

Node& Simulation::node(NodeId id) { return *nodes_[to_index(check(id))]; }
const Node& Simulation::node(NodeId id) const { return *nodes_[to_index(check(id))]; }

std::vector<std::string> Simulation::node_names() const {
    std::vector<std::string> names;
    names.reserve(nodes_.size());
    for (const auto& n : nodes_) names.push_back(n->name());
    return names;
}

void Simulation::set_policy(NodeId dest, DeliveryPolicy policy) { policies_[to_index(check(dest))] = policy; }

const DeliveryPolicy& Simulation::policy_for(NodeId dest) const {
    const auto it = policies_.find(to_index(dest));
    return it == policies_.end() ? default_policy_ : it->second;
}

void Simulation::drop_next(NodeId dest, std::uint32_t count) { forced_drops_[to_index(check(dest))] += count; }

void Simulation::push(Tick time, std::variant<Delivery, Timer, Action> what) {
    queue_.push(Event{time, next_seq_++, current_episode_, std::move(what)});
}

void Simulation::offer(NodeId from, std::uint64_t send_id, const wire::MacAddr& dest, NodeId to,
                       const std::string& kind, const std::shared_ptr<const std::vector<std::uint8_t>>& bytes) {
    const auto& policy = policy_for(to);
    bool dropped = false;
    if (auto it = forced_drops_.find(to_index(to)); it != forced_drops_.end() && it->second > 0) {
        --it->second;
        dropped = true;
    } else if (policy.p_drop >= 1.0) {
        dropped = true;
    } else if (policy.p_drop > 0.0) {
        dropped = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < policy.p_drop;
    }
    trace_.append(TraceEntry{now_, send_id, from, dest, to, kind,
                             dropped ? Disposition::Dropped : Disposition::Delivered, current_episode_});
    if (!dropped) push(now_ + policy.delay, Delivery{to, bytes});
}

void Simulation::send(NodeId from, std::vector<std::uint8_t> bytes) {
    check(from);
    const auto send_id = next_send_++;
    const auto kind = wire::peek_kind(bytes);
    wire::MacAddr dest;
    if (!wire::peek_dest(bytes, dest)) {
        trace_.append(TraceEntry{now_, send_id, from, dest, std::nullopt, kind, Disposition::Dropped,
                                 current_episode_});
        return;
    }
    auto shared = std::make_shared<const std::vector<std::uint8_t>>(std::move(bytes));
    if (dest.is_broadcast()) {
        for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
            if (NodeId{i} != from) offer(from, send_id, dest, NodeId{i}, kind, shared);
        }
        return;
    }
    if (const auto owner = owner_of(dest)) {
        offer(from, send_id, dest, *owner, kind, shared);
    } else {
        trace_.append(TraceEntry{now_, send_id, from, dest, std::nullopt, kind, Disposition::Dropped,
                                 current_episode_});
    }
}

void Simulation::schedule_timer(NodeId node, Tick delay, std::uint64_t token) {
    push(now_ + delay, Timer{check(node), token});
}

void Simulation::schedule_action(Tick at, std::function<void()> fn, EpisodeId episode) {
    const auto saved = current_episode_;
    current_episode_ = episode;
    push(at < now_ ? now_ : at, Action{std::move(fn)});
    current_episode_ = saved;
}

bool Simulation::step() {
    if (queue_.empty()) return false;
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.time;
    current_episode_ = ev.episode;
    if (auto* d = std::get_if<Delivery>(&ev.what)) {
        nodes_[to_index(d->to)]->on_frame(*d->bytes);
    } else if (auto* t = std::get_if<Timer>(&ev.what)) {
        nodes_[to_index(t->node)]->on_timer(t->token);
    } else {
        std::get<Action>(ev.what).fn();
    }
    current_episode_ = kNoEpisode;
    if (observer_) observer_();
    return true;
}

Tick Simulation::run_until_quiescent(Tick max_time) {
    while (!queue_.empty()) {
        if (queue_.top().time > max_time) {
            throw SimError(SimErrc::TimeLimitExceeded,
                           "events still pending past t=" + std::to_string(max_time));
        }
        step();
    }
    return now_;
}

}  // namespace csarp::simnet
