#include "xorcode/network.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "text_reader.hpp"
#include "xorcode/error.hpp"

namespace xorcode {

// Network

NodeId Network::add_node(std::string name) {
    if (name.empty()) throw InvalidArgument("node name must not be empty");
    if (find(name)) throw InvalidArgument("duplicate node '" + name + "'");
    names_.push_back(std::move(name));
    out_.emplace_back();
    in_.emplace_back();
    return names_.size() - 1;
}

EdgeId Network::add_edge(NodeId from, NodeId to) {
    if (from >= node_count() || to >= node_count()) throw InvalidArgument("edge endpoint out of range");
    if (from == to) throw InvalidArgument("self-loop on node '" + names_[from] + "'");
    edges_.push_back({from, to});
    out_[from].push_back(edges_.size() - 1);
    in_[to].push_back(edges_.size() - 1);
    return edges_.size() - 1;
}

void Network::set_source(NodeId node) {
    if (node >= node_count()) throw InvalidArgument("source out of range");
    if (source_ && *source_ != node) throw InvalidArgument("only a single source is supported");
    source_ = node;
}

void Network::add_sink(NodeId node) {
    if (node >= node_count()) throw InvalidArgument("sink out of range");
    if (std::find(sinks_.begin(), sinks_.end(), node) == sinks_.end()) sinks_.push_back(node);
}

std::optional<NodeId> Network::find(std::string_view name) const {
    for (NodeId i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

NodeId Network::node(std::string_view name) const {
    if (auto id = find(name)) return *id;
    throw InvalidArgument("unknown node '" + std::string(name) + "'");
}

NodeId Network::source() const {
    if (!source_) throw InvalidArgument("network has no source");
    return *source_;
}

void Network::validate() const {
    const NodeId s = source();
    if (sinks_.empty()) throw InvalidArgument("network has no sinks");
    for (NodeId t : sinks_)
        if (t == s) throw InvalidArgument("the source cannot also be a sink");
    // Kahn's algorithm.
    std::vector<std::size_t> indegree(node_count());
    for (const auto& e : edges_) ++indegree[e.to];
    std::deque<NodeId> ready;
    for (NodeId v = 0; v < node_count(); ++v)
        if (indegree[v] == 0) ready.push_back(v);
    std::size_t visited = 0;
    while (!ready.empty()) {
        const NodeId v = ready.front();
        ready.pop_front();
        ++visited;
        for (EdgeId e : out_[v])
            if (--indegree[edges_[e].to] == 0) ready.push_back(edges_[e].to);
    }
    if (visited != node_count()) throw InvalidArgument("network contains a directed cycle");
}

Network parse_network(std::string_view text) {
    Network net;
    auto lookup = [&](const detail::Token& t) {
        if (auto id = net.find(t.text)) return *id;
        throw ParseError("undeclared node '" + std::string(t.text) + "'", t.offset);
    };
    for (const auto& line : detail::content_lines(text)) {
        const auto toks = detail::tokens(line);
        const auto& kw = toks[0].text;
        try {
            if (kw == "node" && toks.size() == 2) {
                net.add_node(std::string(toks[1].text));
            } else if (kw == "edge" && toks.size() == 3) {
                net.add_edge(lookup(toks[1]), lookup(toks[2]));
            } else if (kw == "source" && toks.size() == 2) {
                net.set_source(lookup(toks[1]));
            } else if (kw == "sink" && toks.size() == 2) {
                net.add_sink(lookup(toks[1]));
            } else {
                throw ParseError("unrecognised directive '" + std::string(line.text) + "'", line.offset);
            }
        } catch (const ParseError&) {
            throw;
        } catch (const InvalidArgument& e) {
            throw ParseError(e.what(), line.offset);
        }
    }
    try {
        net.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), text.size());
    }
    return net;
}

std::string to_text(const Network& net) {
    std::string out;
    for (NodeId v = 0; v < net.node_count(); ++v) out += "node " + net.name(v) + "\n";
    for (EdgeId e = 0; e < net.edge_count(); ++e)
        out += "edge " + net.name(net.edge(e).from) + " " + net.name(net.edge(e).to) + "\n";
    out += "source " + net.name(net.source()) + "\n";
    for (NodeId t : net.sinks()) out += "sink " + net.name(t) + "\n";
    return out;
}

// Max-flow

namespace {

// Edmonds-Karp on unit capacities. Returns the per-edge flow (0 or 1).
std::vector<char> unit_flow(const Network& net, NodeId sink) {
    const NodeId s = net.source();
    std::vector<char> flow(net.edge_count(), 0);
    if (s == sink) return flow;
    struct Step {
        EdgeId edge;
        bool forward;
    };
    for (;;) {
        std::vector<std::optional<Step>> via(net.node_count());
        std::vector<char> seen(net.node_count(), 0);
        std::deque<NodeId> queue{s};
        seen[s] = 1;
        while (!queue.empty() && !seen[sink]) {
            const NodeId v = queue.front();
            queue.pop_front();
            for (EdgeId e : net.out_edges(v)) {
                const NodeId w = net.edge(e).to;
                if (!flow[e] && !seen[w]) {
                    seen[w] = 1;
                    via[w] = Step{e, true};
                    queue.push_back(w);
                }
            }
            for (EdgeId e : net.in_edges(v)) {
                const NodeId w = net.edge(e).from;
                if (flow[e] && !seen[w]) {
                    seen[w] = 1;
                    via[w] = Step{e, false};
                    queue.push_back(w);
                }
            }
        }
        if (!seen[sink]) return flow;
        for (NodeId v = sink; v != s;) {
            const Step step = *via[v];
            flow[step.edge] = step.forward ? 1 : 0;
            v = step.forward ? net.edge(step.edge).from : net.edge(step.edge).to;
        }
    }
}

}  // namespace

std::size_t max_flow(const Network& net, NodeId sink) {
    const auto flow = unit_flow(net, sink);
    std::size_t total = 0;
    for (EdgeId e : net.out_edges(net.source())) total += static_cast<std::size_t>(flow[e]);
    for (EdgeId e : net.in_edges(net.source())) total -= static_cast<std::size_t>(flow[e]);
    return total;
}

std::vector<Path> edge_disjoint_paths(const Network& net, NodeId sink) {
    auto flow = unit_flow(net, sink);
    const NodeId s = net.source();
    std::vector<Path> paths;
    for (EdgeId first : net.out_edges(s)) {
        if (!flow[first]) continue;
        Path path{first};
        flow[first] = 0;
        NodeId v = net.edge(first).to;
        while (v != sink) {
            // Conservation guarantees an unused outgoing flow edge; the graph
            // is acyclic so the walk terminates.
            EdgeId next = net.edge_count();
            for (EdgeId e : net.out_edges(v))
                if (flow[e]) {
                    next = e;
                    break;
                }
            if (next == net.edge_count()) throw Error("flow decomposition failed at node " + net.name(v));
            flow[next] = 0;
            path.push_back(next);
            v = net.edge(next).to;
        }
        paths.push_back(std::move(path));
    }
    return paths;
}

std::vector<NodeId> path_nodes(const Network& net, const Path& path) {
    std::vector<NodeId> out;
    if (path.empty()) return out;
    out.push_back(net.edge(path.front()).from);
    for (EdgeId e : path) out.push_back(net.edge(e).to);
    return out;
}

std::size_t num_phases(std::size_t n, std::size_t maxflow) {
    if (maxflow == 0) throw InvalidArgument("num_phases: max-flow is zero");
    if (n == 0) throw InvalidArgument("num_phases: n must be at least 1");
    return (n + maxflow - 1) / maxflow;
}

std::vector<std::vector<PacketIndex>> Schedule::path_partition(std::size_t r) const {
    std::vector<std::vector<PacketIndex>> out = routes.at(r).packets;
    for (auto& set : out) std::sort(set.begin(), set.end());
    return out;
}

// Schedule construction

namespace {

using PacketSet = std::vector<PacketIndex>;  // sorted

constexpr std::size_t kSearchBudget = 2'000'000;

class ScheduleSearch {
public:
    ScheduleSearch(const Network& net, std::vector<std::vector<Path>> paths, std::size_t n, std::size_t phases)
        : net_(net), paths_(std::move(paths)), n_(n), phases_(phases), edge_set_(net.edge_count()),
          chosen_(paths_.size()) {
        for (std::size_t s = 0; s < paths_.size(); ++s) chosen_[s].resize(paths_[s].size());
    }

    bool solve() { return place(0); }

    [[nodiscard]] const std::vector<std::vector<PacketSet>>& chosen() const noexcept { return chosen_; }
    [[nodiscard]] bool exhausted() const noexcept { return steps_ >= kSearchBudget; }

private:
    bool place(std::size_t sink) {
        if (sink == paths_.size()) return true;
        if (++steps_ >= kSearchBudget) return false;
        const auto& paths = paths_[sink];

        // Paths that share an edge with an earlier sink inherit its set.
        std::vector<std::optional<PacketSet>> pinned(paths.size());
        for (std::size_t i = 0; i < paths.size(); ++i)
            for (EdgeId e : paths[i]) {
                if (!edge_set_[e]) continue;
                if (pinned[i] && *pinned[i] != *edge_set_[e]) return false;
                pinned[i] = *edge_set_[e];
            }
        std::vector<char> used(n_ + 1, 0);
        std::vector<std::size_t> free_paths;
        for (std::size_t i = 0; i < paths.size(); ++i) {
            if (!pinned[i]) {
                free_paths.push_back(i);
                continue;
            }
            for (PacketIndex x : *pinned[i]) {
                if (used[x]) return false;
                used[x] = 1;
            }
        }
        PacketSet remaining;
        for (std::size_t x = 1; x <= n_; ++x)
            if (!used[x]) remaining.push_back(static_cast<PacketIndex>(x));

        std::vector<EdgeId> touched;
        for (std::size_t i = 0; i < paths.size(); ++i)
            if (pinned[i]) {
                assign(paths[i], *pinned[i], touched);
                chosen_[sink][i] = *pinned[i];
            }
        const bool ok = partition(sink, free_paths, 0, remaining);
        if (!ok) release(touched);
        return ok;
    }

    // Gives free_paths[slot..] an ordered partition of `remaining` into
    // blocks of size phases_, lexicographically by block.
    bool partition(std::size_t sink, const std::vector<std::size_t>& free_paths, std::size_t slot,
                   const PacketSet& remaining) {
        if (slot == free_paths.size()) return place(sink + 1);
        const std::size_t m = remaining.size();
        std::vector<std::size_t> pick(phases_);
        for (std::size_t i = 0; i < phases_; ++i) pick[i] = i;
        const auto& path = paths_[sink][free_paths[slot]];
        for (;;) {
            if (steps_ >= kSearchBudget) return false;
            PacketSet block;
            PacketSet rest;
            std::size_t next = 0;
            for (std::size_t i = 0; i < m; ++i) {
                if (next < phases_ && pick[next] == i) {
                    block.push_back(remaining[i]);
                    ++next;
                } else {
                    rest.push_back(remaining[i]);
                }
            }
            std::vector<EdgeId> touched;
            assign(path, block, touched);
            chosen_[sink][free_paths[slot]] = block;
            if (partition(sink, free_paths, slot + 1, rest)) return true;
            release(touched);
            ++steps_;
            // The last block is forced; other blocks advance to the next
            // combination.
            if (slot + 1 == free_paths.size() || !next_combination(pick, m)) return false;
        }
    }

    static bool next_combination(std::vector<std::size_t>& pick, std::size_t m) {
        const std::size_t r = pick.size();
        std::size_t i = r;
        while (i > 0 && pick[i - 1] == m - r + i - 1) --i;
        if (i == 0) return false;
        ++pick[i - 1];
        for (std::size_t j = i; j < r; ++j) pick[j] = pick[j - 1] + 1;
        return true;
    }

    void assign(const Path& path, const PacketSet& set, std::vector<EdgeId>& touched) {
        for (EdgeId e : path)
            if (!edge_set_[e]) {
                edge_set_[e] = set;
                touched.push_back(e);
            }
    }

    void release(const std::vector<EdgeId>& touched) {
        for (EdgeId e : touched) edge_set_[e].reset();
    }

    const Network& net_;
    std::vector<std::vector<Path>> paths_;
    std::size_t n_;
    std::size_t phases_;
    std::vector<std::optional<PacketSet>> edge_set_;
    std::vector<std::vector<PacketSet>> chosen_;
    std::size_t steps_ = 0;
};

}  // namespace

Schedule build_schedule(const Network& net, std::size_t n) {
    net.validate();
    if (n == 0) throw InvalidArgument("build_schedule: n must be at least 1");
    std::vector<std::size_t> flows;
    for (NodeId t : net.sinks()) flows.push_back(max_flow(net, t));
    const std::size_t f = flows.front();
    for (std::size_t i = 0; i < flows.size(); ++i) {
        if (flows[i] == 0) throw UnsupportedTopology("sink '" + net.name(net.sinks()[i]) + "' is unreachable");
        if (flows[i] != f)
            throw UnsupportedTopology("sinks have unequal max-flow (" + net.name(net.sinks().front()) + ": " +
                                      std::to_string(f) + ", " + net.name(net.sinks()[i]) + ": " +
                                      std::to_string(flows[i]) + ")");
    }
    const std::size_t phases = num_phases(n, f);
    const std::size_t padded = phases * f;
    if (padded > 0xFFFF) throw InvalidArgument("build_schedule: too many packets");

    std::vector<std::vector<Path>> paths;
    for (NodeId t : net.sinks()) paths.push_back(edge_disjoint_paths(net, t));
    ScheduleSearch search(net, paths, padded, phases);
    if (!search.solve()) {
        if (search.exhausted())
            throw InfeasibleSchedule("schedule search budget exhausted without a consistent forwarding assignment");
        throw InfeasibleSchedule("no forwarding-only assignment of " + std::to_string(padded) +
                                 " packets satisfies every sink over the chosen edge-disjoint paths");
    }
    Schedule schedule;
    schedule.n = padded;
    schedule.requested_n = n;
    schedule.phases = phases;
    schedule.maxflow = f;
    for (std::size_t s = 0; s < net.sinks().size(); ++s)
        schedule.routes.push_back({net.sinks()[s], paths[s], search.chosen()[s]});
    return schedule;
}

// Validation

std::vector<std::string> schedule_problems(const Network& net, const Schedule& schedule) {
    std::vector<std::string> problems;
    auto fail = [&](std::string msg) { problems.push_back(std::move(msg)); };

    if (schedule.phases * schedule.maxflow != schedule.n)
        fail("phases x maxflow = " + std::to_string(schedule.phases * schedule.maxflow) + " differs from n = " +
             std::to_string(schedule.n));
    if (schedule.requested_n > schedule.n) fail("requested n exceeds scheduled n");

    std::set<NodeId> routed;
    for (const auto& route : schedule.routes) {
        if (!routed.insert(route.sink).second) fail("sink '" + net.name(route.sink) + "' is routed twice");
    }
    for (NodeId t : net.sinks())
        if (!routed.count(t)) fail("sink '" + net.name(t) + "' has no route");

    // edge -> phase -> packet, filled from every path that crosses the edge.
    std::map<EdgeId, std::vector<PacketIndex>> on_edge;
    for (const auto& route : schedule.routes) {
        const std::string sink = route.sink < net.node_count() ? net.name(route.sink) : "?";
        if (std::find(net.sinks().begin(), net.sinks().end(), route.sink) == net.sinks().end()) {
            fail("route for non-sink node '" + sink + "'");
            continue;
        }
        const std::size_t flow = max_flow(net, route.sink);
        if (route.paths.size() != schedule.maxflow || flow != schedule.maxflow)
            fail("sink '" + sink + "' has " + std::to_string(route.paths.size()) + " paths, max-flow " +
                 std::to_string(flow) + ", schedule max-flow " + std::to_string(schedule.maxflow));
        if (route.packets.size() != route.paths.size()) {
            fail("sink '" + sink + "' packet lists do not match its paths");
            continue;
        }
        std::set<EdgeId> used_edges;
        std::vector<int> seen(schedule.n + 1, 0);
        for (std::size_t i = 0; i < route.paths.size(); ++i) {
            const auto& path = route.paths[i];
            const std::string label = "sink '" + sink + "' path " + std::to_string(i + 1);
            bool walk_ok = !path.empty();
            for (std::size_t h = 0; walk_ok && h < path.size(); ++h) {
                if (path[h] >= net.edge_count()) {
                    walk_ok = false;
                    break;
                }
                const auto& e = net.edge(path[h]);
                if (h == 0 && e.from != net.source()) walk_ok = false;
                if (h > 0 && net.edge(path[h - 1]).to != e.from) walk_ok = false;
                if (h + 1 == path.size() && e.to != route.sink) walk_ok = false;
            }
            if (!walk_ok) {
                fail(label + " is not a source-to-sink walk");
                continue;
            }
            for (EdgeId e : path)
                if (!used_edges.insert(e).second) fail(label + " reuses an edge of another path of the same sink");
            const auto& list = route.packets[i];
            if (list.size() != schedule.phases)
                fail(label + " carries " + std::to_string(list.size()) + " packets, expected " +
                     std::to_string(schedule.phases));
            for (PacketIndex x : list) {
                if (x < 1 || x > schedule.n)
                    fail(label + " carries packet " + std::to_string(x) + " outside 1.." + std::to_string(schedule.n));
                else if (seen[x]++)
                    fail("sink '" + sink + "' receives packet " + std::to_string(x) + " more than once");
            }
            for (EdgeId e : path) {
                auto [it, fresh] = on_edge.emplace(e, list);
                if (!fresh && it->second != list)
                    fail("edge " + net.name(net.edge(e).from) + "->" + net.name(net.edge(e).to) +
                         " carries different packet sequences for different sinks");
            }
        }
        for (std::size_t x = 1; x <= schedule.n; ++x)
            if (!seen[x]) fail("sink '" + sink + "' never receives packet " + std::to_string(x));
    }
    return problems;
}

// Schedule text format

namespace {

std::string hop_token(const Network& net, EdgeId e) {
    const auto& edge = net.edge(e);
    std::size_t ordinal = 0;
    std::size_t parallel = 0;
    for (EdgeId other : net.out_edges(edge.from)) {
        if (net.edge(other).to != edge.to) continue;
        if (other < e) ++ordinal;
        ++parallel;
    }
    std::string tok = net.name(edge.to);
    if (parallel > 1) tok += "~" + std::to_string(ordinal);
    return tok;
}

}  // namespace

std::string to_text(const Network& net, const Schedule& schedule) {
    std::string out = "schedule n " + std::to_string(schedule.n) + " requested " +
                      std::to_string(schedule.requested_n) + " phases " + std::to_string(schedule.phases) +
                      " maxflow " + std::to_string(schedule.maxflow) + "\n";
    for (const auto& route : schedule.routes) {
        out += "sink " + net.name(route.sink) + "\n";
        for (std::size_t i = 0; i < route.paths.size(); ++i) {
            out += "path " + net.name(net.source());
            for (EdgeId e : route.paths[i]) out += " " + hop_token(net, e);
            out += " :";
            for (PacketIndex x : route.packets[i]) out += " " + std::to_string(x);
            out += "\n";
        }
    }
    return out;
}

Schedule parse_schedule(const Network& net, std::string_view text) {
    const auto lines = detail::content_lines(text);
    if (lines.empty()) throw ParseError("empty schedule", 0);
    const auto head = detail::tokens(lines[0]);
    if (head.size() != 9 || head[0].text != "schedule" || head[1].text != "n" || head[3].text != "requested" ||
        head[5].text != "phases" || head[7].text != "maxflow")
        throw ParseError("schedule header must be 'schedule n <n> requested <r> phases <p> maxflow <f>'",
                         lines[0].offset);
    Schedule schedule;
    schedule.n = detail::to_count(head[2]);
    schedule.requested_n = detail::to_count(head[4]);
    schedule.phases = detail::to_count(head[6]);
    schedule.maxflow = detail::to_count(head[8]);

    auto node_of = [&](const detail::Token& t, std::string_view name) {
        if (auto id = net.find(name)) return *id;
        throw ParseError("unknown node '" + std::string(name) + "'", t.offset);
    };
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto toks = detail::tokens(lines[li]);
        if (toks[0].text == "sink" && toks.size() == 2) {
            schedule.routes.push_back({node_of(toks[1], toks[1].text), {}, {}});
            continue;
        }
        if (toks[0].text != "path") throw ParseError("expected 'sink' or 'path'", lines[li].offset);
        if (schedule.routes.empty()) throw ParseError("path before any sink line", lines[li].offset);
        auto colon = std::find_if(toks.begin(), toks.end(), [](const detail::Token& t) { return t.text == ":"; });
        if (colon == toks.end() || colon - toks.begin() < 3)
            throw ParseError("path needs at least two nodes followed by ':'", lines[li].offset);
        Path path;
        NodeId prev = node_of(toks[1], toks[1].text);
        for (auto it = toks.begin() + 2; it != colon; ++it) {
            std::string_view name = it->text;
            std::size_t ordinal = 0;
            if (auto tilde = name.find('~'); tilde != std::string_view::npos) {
                detail::Token num{name.substr(tilde + 1), it->offset + tilde + 1};
                ordinal = detail::to_count(num);
                name = name.substr(0, tilde);
            }
            const NodeId next = node_of(*it, name);
            std::optional<EdgeId> hop;
            std::size_t seen = 0;
            for (EdgeId e : net.out_edges(prev))
                if (net.edge(e).to == next && seen++ == ordinal) {
                    hop = e;
                    break;
                }
            if (!hop)
                throw ParseError("no edge " + net.name(prev) + "->" + std::string(name) + " with that ordinal",
                                 it->offset);
            path.push_back(*hop);
            prev = next;
        }
        std::vector<PacketIndex> packets;
        for (auto it = colon + 1; it != toks.end(); ++it) {
            const std::size_t x = detail::to_count(*it);
            if (x == 0 || x > 0xFFFF) throw ParseError("packet index out of range", it->offset);
            packets.push_back(static_cast<PacketIndex>(x));
        }
        schedule.routes.back().paths.push_back(std::move(path));
        schedule.routes.back().packets.push_back(std::move(packets));
    }
    return schedule;
}

// Simulation

bool SimulationReport::all_decoded() const {
    return !sinks.empty() && std::all_of(sinks.begin(), sinks.end(), [](const SinkReport& s) { return s.success; });
}

SimulationReport simulate(const Network& net, const Schedule& schedule, const CodingScheme& scheme,
                          const SourceBlock& source) {
    if (scheme.n != schedule.n)
        throw InvalidArgument("simulate: scheme codes " + std::to_string(scheme.n) + " packets, schedule sends " +
                              std::to_string(schedule.n));
    if (auto problems = schedule_problems(net, schedule); !problems.empty())
        throw InvalidArgument("simulate: invalid schedule: " + problems.front());

    const auto coded = encode(scheme, source);
    std::vector<Bytes> wire;
    wire.reserve(coded.size());
    for (const auto& c : coded) wire.push_back(serialize(c));

    SimulationReport report;
    report.n = schedule.n;
    report.phases = schedule.phases;
    std::vector<std::vector<CodedPacket>> buffers(schedule.routes.size());
    for (const auto& route : schedule.routes) report.sinks.push_back({net.name(route.sink), {}, 0, false, {}, {}});

    for (std::size_t phase = 0; phase < schedule.phases; ++phase) {
        // What each edge carries during this phase.
        std::map<EdgeId, Bytes> in_flight;
        for (std::size_t r = 0; r < schedule.routes.size(); ++r) {
            const auto& route = schedule.routes[r];
            PhaseDelivery delivery;
            delivery.phase = phase + 1;
            for (std::size_t i = 0; i < route.paths.size(); ++i) {
                const PacketIndex x = route.packets[i][phase];
                const Bytes* carried = &wire[x - 1U];
                for (EdgeId e : route.paths[i]) {
                    auto [it, fresh] = in_flight.emplace(e, *carried);
                    if (!fresh && it->second != *carried)
                        report.conflicts.push_back("phase " + std::to_string(phase + 1) + " edge " +
                                                   net.name(net.edge(e).from) + "->" + net.name(net.edge(e).to));
                    // A relay forwards exactly what arrived on the previous hop.
                    carried = &it->second;
                }
                auto packet = deserialize(*carried);
                delivery.packets.push_back(packet.index);
                buffers[r].push_back(std::move(packet));
            }
            delivery.buffered = buffers[r].size();
            delivery.decodable = decodable_indexes(buffers[r], schedule.n).size();
            auto& sink = report.sinks[r];
            if (delivery.decodable == schedule.n && sink.decoded_at_phase == 0) sink.decoded_at_phase = phase + 1;
            sink.phases.push_back(std::move(delivery));
        }
    }

    for (std::size_t r = 0; r < schedule.routes.size(); ++r) {
        auto& sink = report.sinks[r];
        try {
            sink.recovered = decode(buffers[r], schedule.n);
            sink.success = sink.recovered.packets == source.packets;
            if (!sink.success) sink.error = "decoded block differs from the source block";
        } catch (const Error& e) {
            sink.error = e.what();
        }
    }
    return report;
}

namespace {

std::string join(const std::vector<PacketIndex>& xs) {
    std::string out;
    for (auto x : xs) out += (out.empty() ? "" : ",") + std::to_string(x);
    return out;
}

}  // namespace

std::string to_text(const SimulationReport& report) {
    std::string out;
    for (std::size_t phase = 0; phase < report.phases; ++phase) {
        out += "Phase " + std::to_string(phase + 1) + ":\n";
        for (const auto& sink : report.sinks) {
            const auto& d = sink.phases[phase];
            out += "  " + sink.sink + " <-";
            for (auto x : d.packets) out += " C" + std::to_string(x);
            out += "  (buffer " + std::to_string(d.buffered) + ", decodable " + std::to_string(d.decodable) + "/" +
                   std::to_string(report.n) + ")\n";
        }
    }
    for (const auto& c : report.conflicts) out += "conflict " + c + "\n";
    std::size_t decoded = 0;
    for (const auto& sink : report.sinks) {
        for (const auto& d : sink.phases)
            out += "sink=" + sink.sink + " phase=" + std::to_string(d.phase) + " packets=" + join(d.packets) +
                   " decodable=" + std::to_string(d.decodable) + "\n";
        out += "sink=" + sink.sink + " status=" + (sink.success ? "decoded" : "failed") +
               " decoded_at_phase=" + std::to_string(sink.decoded_at_phase);
        if (!sink.error.empty()) out += " error=\"" + sink.error + "\"";
        out += "\n";
        decoded += sink.success ? 1 : 0;
    }
    out += "summary n=" + std::to_string(report.n) + " phases=" + std::to_string(report.phases) +
           " sinks=" + std::to_string(report.sinks.size()) + " decoded=" + std::to_string(decoded) +
           " conflicts=" + std::to_string(report.conflicts.size()) + "\n";
    return out;
}

}  // namespace xorcode
