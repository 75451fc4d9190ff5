#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xorcode/codec.hpp"

namespace xorcode {

using NodeId = std::size_t;
using EdgeId = std::size_t;

struct Edge {
    NodeId from;
    NodeId to;
};

// Directed acyclic multigraph with unit-capacity edges, one source and one
// or more sinks.
class Network {
public:
    NodeId add_node(std::string name);
    EdgeId add_edge(NodeId from, NodeId to);
    void set_source(NodeId node);
    void add_sink(NodeId node);

    [[nodiscard]] std::size_t node_count() const noexcept { return names_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
    [[nodiscard]] const Edge& edge(EdgeId e) const { return edges_.at(e); }
    [[nodiscard]] const std::string& name(NodeId n) const { return names_.at(n); }
    [[nodiscard]] std::optional<NodeId> find(std::string_view name) const;
    [[nodiscard]] NodeId node(std::string_view name) const;  // throws if unknown
    [[nodiscard]] NodeId source() const;
    [[nodiscard]] const std::vector<NodeId>& sinks() const noexcept { return sinks_; }
    [[nodiscard]] const std::vector<EdgeId>& out_edges(NodeId n) const { return out_.at(n); }
    [[nodiscard]] const std::vector<EdgeId>& in_edges(NodeId n) const { return in_.at(n); }

    // Throws InvalidArgument unless: a source and at least one sink are set,
    // the graph is acyclic, and no sink is the source.
    void validate() const;

private:
    std::vector<std::string> names_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
    std::optional<NodeId> source_;
    std::vector<NodeId> sinks_;
};

// One directive per line: node <name>, edge <from> <to>, source <name>,
// sink <name>; '#' starts a comment.
Network parse_network(std::string_view text);
std::string to_text(const Network& net);

using Path = std::vector<EdgeId>;

// Number of edge-disjoint source-to-sink paths; 0 when the sink is unreachable.
std::size_t max_flow(const Network& net, NodeId sink);
// Decomposition of a maximum integral flow into edge-disjoint paths, ordered
// by the id of their first edge.
std::vector<Path> edge_disjoint_paths(const Network& net, NodeId sink);
std::vector<NodeId> path_nodes(const Network& net, const Path& path);

std::size_t num_phases(std::size_t n, std::size_t maxflow);

struct SinkRoute {
    NodeId sink;
    std::vector<Path> paths;
    // packets[i][phase] is the coded-packet index carried by path i.
    std::vector<std::vector<PacketIndex>> packets;
};

struct Schedule {
    std::size_t n = 0;            // packets actually sent, a multiple of maxflow
    std::size_t requested_n = 0;  // n before padding
    std::size_t phases = 0;
    std::size_t maxflow = 0;
    std::vector<SinkRoute> routes;  // one per sink, in network sink order

    [[nodiscard]] std::size_t padding() const noexcept { return n - requested_n; }
    // Per path of route `r`, its packet indexes sorted ascending.
    [[nodiscard]] std::vector<std::vector<PacketIndex>> path_partition(std::size_t r) const;
};

// Forwarding-only schedule for all sinks (equal max-flow required). n is
// padded up to a multiple of the max-flow. Sinks are handled in order; each
// sink's free paths take the lexicographically first partition of the
// packets not already pinned by edges shared with earlier sinks, with
// backtracking when a later sink cannot be satisfied.
Schedule build_schedule(const Network& net, std::size_t n);

// Independent schedule checker. Returns human-readable problems; empty
// means the schedule is valid for the network.
std::vector<std::string> schedule_problems(const Network& net, const Schedule& schedule);
inline bool is_valid_schedule(const Network& net, const Schedule& schedule) {
    return schedule_problems(net, schedule).empty();
}

// Schedule text format:
//   schedule n <n> requested <r> phases <p> maxflow <f>
//   sink <name>
//   path <node> <node> ... : <packet per phase> ...
// A node token may carry "~k" to pick the k-th parallel edge (file order)
// from the previous node.
std::string to_text(const Network& net, const Schedule& schedule);
Schedule parse_schedule(const Network& net, std::string_view text);

struct PhaseDelivery {
    std::size_t phase = 0;  // 1-based
    std::vector<PacketIndex> packets;
    std::size_t buffered = 0;
    std::size_t decodable = 0;
};

struct SinkReport {
    std::string sink;
    std::vector<PhaseDelivery> phases;
    std::size_t decoded_at_phase = 0;  // first phase after which all n are decodable; 0 if never
    bool success = false;              // decoded and equal to the source block
    std::string error;
    SourceBlock recovered;
};

struct SimulationReport {
    std::size_t n = 0;
    std::size_t phases = 0;
    std::vector<SinkReport> sinks;
    // Edges on which two paths tried to forward different bytes in one phase.
    std::vector<std::string> conflicts;

    [[nodiscard]] bool all_decoded() const;
};

// Replays the schedule phase by phase. Relays copy serialized packets
// byte for byte; sinks deserialize, buffer and decode from headers only.
SimulationReport simulate(const Network& net, const Schedule& schedule, const CodingScheme& scheme,
                          const SourceBlock& source);

// Human-readable log followed by key=value lines.
std::string to_text(const SimulationReport& report);

}  // namespace xorcode
