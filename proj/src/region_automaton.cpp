#include "tsyn/region_automaton.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "tsyn/errors.hpp"

namespace tsyn {

std::vector<std::vector<int>> RegionGraph::adjacency() const {
    std::vector<std::vector<int>> adj(nodes.size());
    for (int i = 0; i < static_cast<int>(edges.size()); ++i)
        adj[static_cast<std::size_t>(edges[static_cast<std::size_t>(i)].from)].push_back(i);
    return adj;
}

namespace {

struct NodeKey {
    LocationId loc;
    std::size_t region_hash;
    bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const {
        return std::hash<int>()(k.loc) * 1000003u ^ k.region_hash;
    }
};

}  // namespace

RegionGraph region_graph(const TimedAutomaton& a, std::int64_t m, std::size_t cap) {
    a.validate();
    if (m < a.max_constant())
        throw PreconditionError("region construction needs m >= the automaton's max constant");

    RegionGraph g;
    g.mode = a.mode;

    std::unordered_map<NodeKey, std::vector<int>, NodeKeyHash> index;
    auto intern = [&](LocationId loc, const Region& r) -> int {
        NodeKey key{loc, r.hash()};
        auto& bucket = index[key];
        for (int i : bucket)
            if (g.nodes[static_cast<std::size_t>(i)].region.same_class(r)) return i;
        if (cap && g.nodes.size() >= cap) throw ResourceError("region-automaton", cap);
        g.nodes.push_back({loc, r});
        bucket.push_back(static_cast<int>(g.nodes.size() - 1));
        return static_cast<int>(g.nodes.size() - 1);
    };

    Region r0 = region_of(ClockValuation(a.clocks.size()), m);
    std::deque<int> work;
    for (LocationId l : a.initial) {
        int n = intern(l, r0);
        if (std::find(g.initial.begin(), g.initial.end(), n) == g.initial.end()) {
            g.initial.push_back(n);
            work.push_back(n);
        }
    }
    std::vector<bool> queued(g.nodes.size(), false);
    for (int n : g.initial) queued[static_cast<std::size_t>(n)] = true;

    auto adjacency_of = [&](LocationId loc) {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(a.transitions.size()); ++i)
            if (a.transitions[static_cast<std::size_t>(i)].from == loc) out.push_back(i);
        return out;
    };
    std::vector<std::vector<int>> trans_by_loc(a.locations.size());
    for (LocationId l = 0; l < a.location_count(); ++l) trans_by_loc[static_cast<std::size_t>(l)] = adjacency_of(l);

    std::unordered_map<std::uint64_t, bool> edge_seen;
    auto edge_key = [](int from, std::optional<SymbolId> label, int to) {
        std::uint64_t l = label ? static_cast<std::uint64_t>(*label + 1) : 0;
        return (static_cast<std::uint64_t>(from) << 40) ^ (l << 24) ^ static_cast<std::uint64_t>(to);
    };

    while (!work.empty()) {
        int cur = work.front();
        work.pop_front();
        LocationId loc = g.nodes[static_cast<std::size_t>(cur)].loc;
        // Walk the time-successor chain once and fire everything enabled.
        Region r = g.nodes[static_cast<std::size_t>(cur)].region;
        int steps = 0;
        while (true) {
            for (int ti : trans_by_loc[static_cast<std::size_t>(loc)]) {
                const TimedTransition& t = a.transitions[static_cast<std::size_t>(ti)];
                if (!r.satisfies(t.guard)) continue;
                Region target_region = region_reset(r, t.resets);
                int to = intern(t.to, target_region);
                auto key = edge_key(cur, t.label, to);
                if (!edge_seen.count(key)) {
                    edge_seen.emplace(key, true);
                    g.edges.push_back({cur, t.label, to, steps, t.resets});
                }
                if (to >= static_cast<int>(queued.size())) queued.resize(g.nodes.size(), false);
                if (!queued[static_cast<std::size_t>(to)]) {
                    queued[static_cast<std::size_t>(to)] = true;
                    work.push_back(to);
                }
            }
            Region next = region_time_successor(r);
            if (next.same_class(r)) break;
            r = next;
            ++steps;
        }
    }

    g.node_final.assign(g.nodes.size(), false);
    if (a.mode == AcceptanceMode::GenBuchi) {
        g.node_gen_final.resize(a.gen_final.size());
        for (std::size_t s = 0; s < a.gen_final.size(); ++s) {
            g.node_gen_final[s].assign(g.nodes.size(), false);
            for (std::size_t i = 0; i < g.nodes.size(); ++i)
                if (a.gen_final[s].count(g.nodes[i].loc)) g.node_gen_final[s][i] = true;
        }
    } else {
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            if (a.final.count(g.nodes[i].loc)) g.node_final[i] = true;
    }
    return g;
}

UntimedAutomaton region_automaton(const TimedAutomaton& a, std::int64_t m, std::size_t cap) {
    RegionGraph g = region_graph(a, m, cap);

    // Canonical state order: (location index, region encoding).
    std::vector<int> order(g.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        const auto& nx = g.nodes[static_cast<std::size_t>(x)];
        const auto& ny = g.nodes[static_cast<std::size_t>(y)];
        if (nx.loc != ny.loc) return nx.loc < ny.loc;
        return nx.region.order(ny.region) < 0;
    });
    std::vector<int> rank(g.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    UntimedAutomaton out;
    out.alphabet = a.alphabet;
    out.mode = a.mode;
    out.states.resize(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& n = g.nodes[i];
        out.states[static_cast<std::size_t>(rank[i])] =
            a.locations[static_cast<std::size_t>(n.loc)] + "@" + n.region.str(a.clocks);
    }
    for (int i : g.initial) out.initial.insert(rank[static_cast<std::size_t>(i)]);
    if (a.mode == AcceptanceMode::GenBuchi) {
        out.gen_final.resize(g.node_gen_final.size());
        for (std::size_t s = 0; s < g.node_gen_final.size(); ++s)
            for (std::size_t i = 0; i < g.nodes.size(); ++i)
                if (g.node_gen_final[s][i]) out.gen_final[s].insert(rank[i]);
    } else {
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            if (g.node_final[i]) out.final.insert(rank[i]);
    }
    std::vector<std::tuple<int, int, int>> seen;  // (from, label+1, to)
    seen.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        int lbl = e.label ? *e.label + 1 : 0;
        seen.emplace_back(rank[static_cast<std::size_t>(e.from)], lbl,
                          rank[static_cast<std::size_t>(e.to)]);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const auto& [f, lbl, to] : seen)
        out.add_transition(f, lbl == 0 ? std::nullopt : std::optional<SymbolId>(lbl - 1), to);
    return out;
}

namespace {

// Tarjan SCC, iterative.
std::vector<int> scc_of(const RegionGraph& g) {
    int n = static_cast<int>(g.nodes.size());
    auto adj = g.adjacency();
    std::vector<int> comp(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n)),
        num(static_cast<std::size_t>(n), -1);
    std::vector<int> stack;
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    int counter = 0, comps = 0;

    struct Frame {
        int v;
        std::size_t edge_pos;
    };
    for (int root = 0; root < n; ++root) {
        if (num[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<Frame> call;
        call.push_back({root, 0});
        num[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge_pos < adj[static_cast<std::size_t>(f.v)].size()) {
                int ei = adj[static_cast<std::size_t>(f.v)][f.edge_pos++];
                int w = g.edges[static_cast<std::size_t>(ei)].to;
                if (num[static_cast<std::size_t>(w)] == -1) {
                    num[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = true;
                    call.push_back({w, 0});
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(f.v)] =
                        std::min(low[static_cast<std::size_t>(f.v)], num[static_cast<std::size_t>(w)]);
                }
            } else {
                int v = f.v;
                call.pop_back();
                if (!call.empty())
                    low[static_cast<std::size_t>(call.back().v)] =
                        std::min(low[static_cast<std::size_t>(call.back().v)], low[static_cast<std::size_t>(v)]);
                if (low[static_cast<std::size_t>(v)] == num[static_cast<std::size_t>(v)]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = false;
                        comp[static_cast<std::size_t>(w)] = comps;
                        if (w == v) break;
                    }
                    ++comps;
                }
            }
        }
    }
    return comp;
}

std::vector<int> bfs_path_edges(const RegionGraph& g, const std::vector<int>& sources, int target) {
    auto adj = g.adjacency();
    std::vector<int> pred_edge(g.nodes.size(), -1);
    std::vector<bool> visited(g.nodes.size(), false);
    std::deque<int> q;
    for (int s : sources) {
        visited[static_cast<std::size_t>(s)] = true;
        q.push_back(s);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (v == target) break;
        for (int ei : adj[static_cast<std::size_t>(v)]) {
            int w = g.edges[static_cast<std::size_t>(ei)].to;
            if (!visited[static_cast<std::size_t>(w)]) {
                visited[static_cast<std::size_t>(w)] = true;
                pred_edge[static_cast<std::size_t>(w)] = ei;
                q.push_back(w);
            }
        }
    }
    std::vector<int> path;
    int cur = target;
    while (pred_edge[static_cast<std::size_t>(cur)] != -1) {
        int ei = pred_edge[static_cast<std::size_t>(cur)];
        path.push_back(ei);
        cur = g.edges[static_cast<std::size_t>(ei)].from;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

// Cycle through `through_nodes` (all in one SCC) that also uses edge
// `must_edge`. Built by stitching BFS paths inside the SCC.
std::vector<int> cycle_in_scc(const RegionGraph& g, const std::vector<int>& comp, int scc,
                              const std::vector<int>& through_nodes, int must_edge) {
    auto adj = g.adjacency();
    auto path_inside = [&](int from, int to) {
        std::vector<int> pred_edge(g.nodes.size(), -1);
        std::vector<bool> visited(g.nodes.size(), false);
        std::deque<int> q;
        visited[static_cast<std::size_t>(from)] = true;
        q.push_back(from);
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int ei : adj[static_cast<std::size_t>(v)]) {
                int w = g.edges[static_cast<std::size_t>(ei)].to;
                if (comp[static_cast<std::size_t>(w)] != scc) continue;
                if (!visited[static_cast<std::size_t>(w)]) {
                    visited[static_cast<std::size_t>(w)] = true;
                    pred_edge[static_cast<std::size_t>(w)] = ei;
                    q.push_back(w);
                }
            }
        }
        std::vector<int> path;
        int cur = to;
        if (cur != from && pred_edge[static_cast<std::size_t>(cur)] == -1)
            throw InternalError("disconnected SCC members");
        while (cur != from) {
            int ei = pred_edge[static_cast<std::size_t>(cur)];
            path.push_back(ei);
            cur = g.edges[static_cast<std::size_t>(ei)].from;
        }
        std::reverse(path.begin(), path.end());
        return path;
    };

    // visit order: must_edge, then each through node, then back to the start
    std::vector<int> loop;
    int start = g.edges[static_cast<std::size_t>(must_edge)].from;
    loop.push_back(must_edge);
    int cur = g.edges[static_cast<std::size_t>(must_edge)].to;
    for (int node : through_nodes) {
        auto seg = path_inside(cur, node);
        loop.insert(loop.end(), seg.begin(), seg.end());
        cur = node;
    }
    auto back = path_inside(cur, start);
    loop.insert(loop.end(), back.begin(), back.end());
    return loop;
}

}  // namespace

EmptinessResult nta_emptiness(const TimedAutomaton& a, std::size_t cap) {
    RegionGraph g = region_graph(a, std::max<std::int64_t>(a.max_constant(), 0), cap);
    EmptinessResult res{true, std::nullopt, std::move(g)};
    const RegionGraph& graph = res.graph;

    if (a.mode == AcceptanceMode::Finite) {
        for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
            if (!graph.node_final[i]) continue;
            // reachability is implicit: every constructed node is reachable
            res.empty = false;
            res.witness = EmptinessWitness{bfs_path_edges(graph, graph.initial, static_cast<int>(i)), {}};
            return res;
        }
        return res;
    }

    std::vector<int> comp = scc_of(graph);
    int comps = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::size_t n_sets = graph.mode == AcceptanceMode::GenBuchi ? graph.node_gen_final.size() : 1;

    for (int c = 0; c < comps; ++c) {
        // symbol edge inside the SCC
        int sym_edge = -1;
        bool has_internal_edge = false;
        for (std::size_t ei = 0; ei < graph.edges.size(); ++ei) {
            const auto& e = graph.edges[ei];
            if (comp[static_cast<std::size_t>(e.from)] != c || comp[static_cast<std::size_t>(e.to)] != c)
                continue;
            has_internal_edge = true;
            if (e.label) {
                sym_edge = static_cast<int>(ei);
                break;
            }
        }
        if (!has_internal_edge || sym_edge == -1) continue;

        std::vector<int> through;
        bool ok = true;
        for (std::size_t s = 0; s < n_sets; ++s) {
            int found = -1;
            for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
                if (comp[i] != c) continue;
                bool fin = graph.mode == AcceptanceMode::GenBuchi ? graph.node_gen_final[s][i]
                                                                  : graph.node_final[i];
                if (fin) {
                    found = static_cast<int>(i);
                    break;
                }
            }
            if (found == -1) {
                ok = false;
                break;
            }
            through.push_back(found);
        }
        if (!ok) continue;

        res.empty = false;
        std::vector<int> loop = cycle_in_scc(graph, comp, c, through, sym_edge);
        int entry = graph.edges[static_cast<std::size_t>(sym_edge)].from;
        res.witness = EmptinessWitness{bfs_path_edges(graph, graph.initial, entry), std::move(loop)};
        return res;
    }
    return res;
}

TimedWord instantiate_witness(const TimedAutomaton& a, const RegionGraph& g,
                              const std::vector<int>& stem_edges) {
    ClockValuation v(a.clocks.size());
    Rational now(0);
    std::int64_t m = g.nodes.empty() ? 0 : g.nodes.front().region.max_constant();
    std::vector<TimedLetter> letters;
    for (int ei : stem_edges) {
        const auto& e = g.edges[static_cast<std::size_t>(ei)];
        // advance v to the region the edge fired at
        for (int step = 0; step < e.elapse_steps; ++step) {
            auto d = successor_delta(v, m);
            if (!d) throw InternalError("witness region not reachable by elapse");
            v = v.plus(*d);
            now = now + *d;
        }
        if (e.label)
            letters.push_back({a.alphabet[static_cast<std::size_t>(*e.label)], now});
        v = v.reset(e.resets);
    }
    return TimedWord(std::move(letters));
}

}  // namespace tsyn
