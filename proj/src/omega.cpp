#include "tsyn/omega.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "tsyn/errors.hpp"

namespace tsyn {

namespace {

// epsilon closures: plain reachability and reachability through a final state
void epsilon_closures(const UntimedAutomaton& n, std::vector<std::set<StateId>>& plain,
                      std::vector<std::set<StateId>>& via_final) {
    int sz = n.state_count();
    std::vector<std::vector<StateId>> eps(static_cast<std::size_t>(sz));
    for (const auto& t : n.transitions)
        if (!t.label) eps[static_cast<std::size_t>(t.from)].push_back(t.to);

    plain.assign(static_cast<std::size_t>(sz), {});
    via_final.assign(static_cast<std::size_t>(sz), {});
    for (StateId s = 0; s < sz; ++s) {
        // BFS over (state, seen-final) pairs
        std::deque<std::pair<StateId, bool>> q;
        std::set<std::pair<StateId, bool>> visited;
        bool init_final = n.is_final(s);
        q.push_back({s, init_final});
        visited.insert({s, init_final});
        while (!q.empty()) {
            auto [cur, flag] = q.front();
            q.pop_front();
            plain[static_cast<std::size_t>(s)].insert(cur);
            if (flag || n.is_final(cur)) via_final[static_cast<std::size_t>(s)].insert(cur);
            for (StateId nx : eps[static_cast<std::size_t>(cur)]) {
                bool nf = flag || n.is_final(cur) || n.is_final(nx);
                if (visited.insert({nx, nf}).second) q.push_back({nx, nf});
            }
        }
    }
}

}  // namespace

UntimedAutomaton remove_epsilon(const UntimedAutomaton& n) {
    if (n.mode != AcceptanceMode::Buchi)
        throw PreconditionError("epsilon removal expects Buchi acceptance");
    if (!n.has_epsilon()) return n;

    std::vector<std::set<StateId>> plain, via_final;
    epsilon_closures(n, plain, via_final);

    // states (q, flag): flag set iff the step entering q was final-visiting
    UntimedAutomaton out;
    out.alphabet = n.alphabet;
    out.mode = AcceptanceMode::Buchi;
    auto id = [&](StateId q, bool flag) { return q * 2 + (flag ? 1 : 0); };
    for (StateId q = 0; q < n.state_count(); ++q) {
        out.add_state(n.states[static_cast<std::size_t>(q)] + "-");
        out.add_state(n.states[static_cast<std::size_t>(q)] + "+");
    }
    for (StateId q : n.initial) out.initial.insert(id(q, false));
    for (StateId q = 0; q < n.state_count(); ++q) out.final.insert(id(q, true));

    std::set<std::tuple<StateId, SymbolId, StateId, bool>> edges;
    for (StateId q = 0; q < n.state_count(); ++q) {
        for (StateId p : plain[static_cast<std::size_t>(q)]) {
            bool via = via_final[static_cast<std::size_t>(q)].count(p) > 0;
            for (const auto& t : n.transitions) {
                if (t.from != p || !t.label) continue;
                bool good = via || n.is_final(p) || n.is_final(t.to);
                edges.insert({q, *t.label, t.to, good});
            }
        }
    }
    // a non-good edge is subsumed by a good one with the same endpoints
    for (const auto& [q, s, to, good] : edges) {
        if (!good && edges.count({q, s, to, true})) continue;
        out.add_transition(id(q, false), s, id(to, good));
        out.add_transition(id(q, true), s, id(to, good));
    }
    return out;
}

UntimedAutomaton degeneralize(const UntimedAutomaton& g) {
    if (g.mode != AcceptanceMode::GenBuchi) return g;
    std::size_t n = g.gen_final.size();
    if (n == 1) {
        UntimedAutomaton out = g;
        out.mode = AcceptanceMode::Buchi;
        out.final = g.gen_final[0];
        out.gen_final.clear();
        return out;
    }
    UntimedAutomaton out;
    out.alphabet = g.alphabet;
    out.mode = AcceptanceMode::Buchi;
    auto id = [&](StateId q, std::size_t i) {
        return q * static_cast<int>(n) + static_cast<int>(i);
    };
    for (StateId q = 0; q < g.state_count(); ++q)
        for (std::size_t i = 0; i < n; ++i)
            out.add_state(g.states[static_cast<std::size_t>(q)] + "/" + std::to_string(i));
    for (StateId q : g.initial) out.initial.insert(id(q, 0));
    for (const auto& t : g.transitions) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t nx = g.gen_final[i].count(t.from) ? (i + 1) % n : i;
            out.add_transition(id(t.from, i), t.label, id(t.to, nx));
        }
    }
    for (StateId q : g.gen_final[n - 1]) out.final.insert(id(q, n - 1));
    return out;
}

bool accepts_lasso(const UntimedAutomaton& m, const LassoWord& u) {
    if (u.loop.empty()) throw DomainError("lasso loop must be nonempty");
    if (m.mode == AcceptanceMode::Finite) throw PreconditionError("lasso membership is an omega query");

    std::vector<SymbolId> stem, loop;
    auto sym = [&](const std::string& s) {
        auto it = std::find(m.alphabet.begin(), m.alphabet.end(), s);
        if (it == m.alphabet.end()) throw DomainError("lasso symbol outside alphabet: " + s);
        return static_cast<SymbolId>(it - m.alphabet.begin());
    };
    for (const auto& s : u.stem) stem.push_back(sym(s));
    for (const auto& s : u.loop) loop.push_back(sym(s));

    // product of m with the lasso shape; positions: stem 0..S-1, then loop
    int S = static_cast<int>(stem.size()), L = static_cast<int>(loop.size());
    int positions = S + L;
    auto node = [&](StateId q, int pos) { return q * positions + pos; };
    auto letter_at = [&](int pos) { return pos < S ? stem[static_cast<std::size_t>(pos)]
                                                   : loop[static_cast<std::size_t>(pos - S)]; };
    auto next_pos = [&](int pos) { return pos + 1 < S + L ? pos + 1 : S; };

    int total = m.state_count() * positions;
    if (total == 0) return false;
    std::vector<std::vector<std::pair<int, bool>>> adj(static_cast<std::size_t>(total));
    // edge flag: advances the word position
    for (const auto& t : m.transitions) {
        for (int pos = 0; pos < positions; ++pos) {
            if (!t.label) {
                adj[static_cast<std::size_t>(node(t.from, pos))].push_back({node(t.to, pos), false});
            } else if (*t.label == letter_at(pos)) {
                adj[static_cast<std::size_t>(node(t.from, pos))].push_back(
                    {node(t.to, next_pos(pos)), true});
            }
        }
    }

    // reachable set
    std::vector<bool> reach(static_cast<std::size_t>(total), false);
    std::deque<int> q;
    for (StateId s : m.initial) {
        reach[static_cast<std::size_t>(node(s, 0))] = true;
        q.push_back(node(s, 0));
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (auto [w, fl] : adj[static_cast<std::size_t>(v)]) {
            if (!reach[static_cast<std::size_t>(w)]) {
                reach[static_cast<std::size_t>(w)] = true;
                q.push_back(w);
            }
        }
    }

    // SCC (simple iterative Tarjan on the product)
    std::vector<int> comp(static_cast<std::size_t>(total), -1), low(static_cast<std::size_t>(total)),
        num(static_cast<std::size_t>(total), -1);
    std::vector<int> stck;
    std::vector<bool> on(static_cast<std::size_t>(total), false);
    int counter = 0, comps = 0;
    struct Frame {
        int v;
        std::size_t i;
    };
    for (int root = 0; root < total; ++root) {
        if (!reach[static_cast<std::size_t>(root)] || num[static_cast<std::size_t>(root)] != -1)
            continue;
        std::vector<Frame> call{{root, 0}};
        num[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stck.push_back(root);
        on[static_cast<std::size_t>(root)] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.i < adj[static_cast<std::size_t>(f.v)].size()) {
                int w = adj[static_cast<std::size_t>(f.v)][f.i++].first;
                if (!reach[static_cast<std::size_t>(w)]) continue;
                if (num[static_cast<std::size_t>(w)] == -1) {
                    num[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
                    stck.push_back(w);
                    on[static_cast<std::size_t>(w)] = true;
                    call.push_back({w, 0});
                } else if (on[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(f.v)] = std::min(low[static_cast<std::size_t>(f.v)],
                                                                  num[static_cast<std::size_t>(w)]);
                }
            } else {
                int v = f.v;
                call.pop_back();
                if (!call.empty())
                    low[static_cast<std::size_t>(call.back().v)] = std::min(
                        low[static_cast<std::size_t>(call.back().v)], low[static_cast<std::size_t>(v)]);
                if (low[static_cast<std::size_t>(v)] == num[static_cast<std::size_t>(v)]) {
                    while (true) {
                        int w = stck.back();
                        stck.pop_back();
                        on[static_cast<std::size_t>(w)] = false;
                        comp[static_cast<std::size_t>(w)] = comps;
                        if (w == v) break;
                    }
                    ++comps;
                }
            }
        }
    }

    std::size_t n_sets = m.mode == AcceptanceMode::GenBuchi ? m.gen_final.size() : 1;
    auto is_final_state = [&](StateId q2, std::size_t set) {
        return m.mode == AcceptanceMode::GenBuchi ? m.gen_final[set].count(q2) > 0
                                                  : m.is_final(q2);
    };
    for (int c = 0; c < comps; ++c) {
        bool advancing = false;
        for (int v = 0; v < total && !advancing; ++v) {
            if (comp[static_cast<std::size_t>(v)] != c) continue;
            for (auto [w, fl] : adj[static_cast<std::size_t>(v)])
                if (fl && comp[static_cast<std::size_t>(w)] == c && reach[static_cast<std::size_t>(w)]) {
                    advancing = true;
                    break;
                }
        }
        if (!advancing) continue;
        bool all_sets = true;
        for (std::size_t s = 0; s < n_sets && all_sets; ++s) {
            bool found = false;
            for (int v = 0; v < total; ++v) {
                if (comp[static_cast<std::size_t>(v)] != c || !reach[static_cast<std::size_t>(v)])
                    continue;
                if (is_final_state(v / positions, s)) {
                    found = true;
                    break;
                }
            }
            all_sets = found;
        }
        if (all_sets) return true;
    }
    return false;
}

UntimedAutomaton trim_omega(const UntimedAutomaton& a_in) {
    UntimedAutomaton a = a_in;
    // forward reachability
    auto adj = a.adjacency();
    std::vector<bool> reach(static_cast<std::size_t>(a.state_count()), false);
    std::deque<StateId> q;
    for (StateId s : a.initial) {
        reach[static_cast<std::size_t>(s)] = true;
        q.push_back(s);
    }
    while (!q.empty()) {
        StateId v = q.front();
        q.pop_front();
        for (int ei : adj[static_cast<std::size_t>(v)]) {
            StateId w = a.transitions[static_cast<std::size_t>(ei)].to;
            if (!reach[static_cast<std::size_t>(w)]) {
                reach[static_cast<std::size_t>(w)] = true;
                q.push_back(w);
            }
        }
    }
    // backward reachability from accepting cycles is approximated by: states
    // that can reach a cycle-capable final-intersecting SCC; cheap version:
    // keep states that can reach every final set infinitely — computed via
    // SCCs on the reachable part.
    // Build SCCs over reachable states.
    int total = a.state_count();
    std::vector<int> comp(static_cast<std::size_t>(total), -1);
    {
        std::vector<int> low(static_cast<std::size_t>(total)), num(static_cast<std::size_t>(total), -1);
        std::vector<int> stck;
        std::vector<bool> on(static_cast<std::size_t>(total), false);
        int counter = 0, comps = 0;
        struct Frame {
            int v;
            std::size_t i;
        };
        for (int root = 0; root < total; ++root) {
            if (!reach[static_cast<std::size_t>(root)] || num[static_cast<std::size_t>(root)] != -1)
                continue;
            std::vector<Frame> call{{root, 0}};
            num[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
            stck.push_back(root);
            on[static_cast<std::size_t>(root)] = true;
            while (!call.empty()) {
                Frame& f = call.back();
                if (f.i < adj[static_cast<std::size_t>(f.v)].size()) {
                    int ei = adj[static_cast<std::size_t>(f.v)][f.i++];
                    int w = a.transitions[static_cast<std::size_t>(ei)].to;
                    if (!reach[static_cast<std::size_t>(w)]) continue;
                    if (num[static_cast<std::size_t>(w)] == -1) {
                        num[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
                        stck.push_back(w);
                        on[static_cast<std::size_t>(w)] = true;
                        call.push_back({w, 0});
                    } else if (on[static_cast<std::size_t>(w)]) {
                        low[static_cast<std::size_t>(f.v)] =
                            std::min(low[static_cast<std::size_t>(f.v)],
                                     num[static_cast<std::size_t>(w)]);
                    }
                } else {
                    int v = f.v;
                    call.pop_back();
                    if (!call.empty())
                        low[static_cast<std::size_t>(call.back().v)] =
                            std::min(low[static_cast<std::size_t>(call.back().v)],
                                     low[static_cast<std::size_t>(v)]);
                    if (low[static_cast<std::size_t>(v)] == num[static_cast<std::size_t>(v)]) {
                        while (true) {
                            int w = stck.back();
                            stck.pop_back();
                            on[static_cast<std::size_t>(w)] = false;
                            comp[static_cast<std::size_t>(w)] = comps;
                            if (w == v) break;
                        }
                        ++comps;
                    }
                }
            }
        }
        // good SCC: contains an internal edge and meets every final set
        std::size_t n_sets = a.mode == AcceptanceMode::GenBuchi ? a.gen_final.size() : 1;
        std::vector<bool> scc_edge(static_cast<std::size_t>(comps), false);
        std::vector<std::vector<bool>> scc_final(n_sets,
                                                 std::vector<bool>(static_cast<std::size_t>(comps), false));
        for (const auto& t : a.transitions) {
            if (!reach[static_cast<std::size_t>(t.from)] || !reach[static_cast<std::size_t>(t.to)])
                continue;
            if (comp[static_cast<std::size_t>(t.from)] == comp[static_cast<std::size_t>(t.to)])
                scc_edge[static_cast<std::size_t>(comp[static_cast<std::size_t>(t.from)])] = true;
        }
        for (int v = 0; v < total; ++v) {
            if (!reach[static_cast<std::size_t>(v)]) continue;
            for (std::size_t s = 0; s < n_sets; ++s) {
                bool fin = a.mode == AcceptanceMode::GenBuchi ? a.gen_final[s].count(v) > 0
                                                              : a.is_final(v);
                if (fin) scc_final[s][static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] = true;
            }
        }
        std::vector<bool> good(static_cast<std::size_t>(comps), false);
        for (int c = 0; c < comps; ++c) {
            if (!scc_edge[static_cast<std::size_t>(c)]) continue;
            bool all = true;
            for (std::size_t s = 0; s < n_sets; ++s) all = all && scc_final[s][static_cast<std::size_t>(c)];
            good[static_cast<std::size_t>(c)] = all;
        }
        // states that can reach a good SCC
        std::vector<bool> live(static_cast<std::size_t>(total), false);
        for (int v = 0; v < total; ++v)
            if (reach[static_cast<std::size_t>(v)] && good[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])])
                live[static_cast<std::size_t>(v)] = true;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& t : a.transitions) {
                if (!reach[static_cast<std::size_t>(t.from)]) continue;
                if (live[static_cast<std::size_t>(t.to)] && !live[static_cast<std::size_t>(t.from)]) {
                    live[static_cast<std::size_t>(t.from)] = true;
                    changed = true;
                }
            }
        }
        reach = live;
    }

    // rebuild restricted to live states
    UntimedAutomaton out;
    out.alphabet = a.alphabet;
    out.mode = a.mode;
    std::vector<StateId> remap(static_cast<std::size_t>(total), -1);
    for (int v = 0; v < total; ++v)
        if (reach[static_cast<std::size_t>(v)])
            remap[static_cast<std::size_t>(v)] = out.add_state(a.states[static_cast<std::size_t>(v)]);
    for (StateId s : a.initial)
        if (remap[static_cast<std::size_t>(s)] != -1) out.initial.insert(remap[static_cast<std::size_t>(s)]);
    for (StateId s : a.final)
        if (remap[static_cast<std::size_t>(s)] != -1) out.final.insert(remap[static_cast<std::size_t>(s)]);
    out.gen_final.resize(a.gen_final.size());
    for (std::size_t i = 0; i < a.gen_final.size(); ++i)
        for (StateId s : a.gen_final[i])
            if (remap[static_cast<std::size_t>(s)] != -1)
                out.gen_final[i].insert(remap[static_cast<std::size_t>(s)]);
    if (out.mode == AcceptanceMode::GenBuchi && out.gen_final.empty())
        out.gen_final.push_back({});
    for (const auto& t : a.transitions) {
        if (remap[static_cast<std::size_t>(t.from)] == -1 || remap[static_cast<std::size_t>(t.to)] == -1)
            continue;
        out.add_transition(remap[static_cast<std::size_t>(t.from)], t.label,
                           remap[static_cast<std::size_t>(t.to)]);
    }
    return out;
}

UntimedAutomaton bisim_quotient(const UntimedAutomaton& a) {
    if (a.has_epsilon()) throw PreconditionError("bisimulation quotient expects epsilon-free input");
    int n = a.state_count();
    std::size_t n_sets = a.mode == AcceptanceMode::GenBuchi ? a.gen_final.size() : 1;

    // initial partition by finality signature
    std::vector<int> block(static_cast<std::size_t>(n), 0);
    {
        std::map<std::vector<bool>, int> sig_ids;
        for (int v = 0; v < n; ++v) {
            std::vector<bool> sig;
            for (std::size_t s = 0; s < n_sets; ++s)
                sig.push_back(a.mode == AcceptanceMode::GenBuchi ? a.gen_final[s].count(v) > 0
                                                                 : a.is_final(v));
            auto [it, _] = sig_ids.emplace(sig, static_cast<int>(sig_ids.size()));
            block[static_cast<std::size_t>(v)] = it->second;
        }
    }

    auto adj = a.adjacency();
    while (true) {
        std::map<std::pair<int, std::vector<std::pair<SymbolId, std::set<int>>>>, int> sig_ids;
        std::vector<int> next(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            std::map<SymbolId, std::set<int>> succ;
            for (int ei : adj[static_cast<std::size_t>(v)]) {
                const auto& t = a.transitions[static_cast<std::size_t>(ei)];
                succ[*t.label].insert(block[static_cast<std::size_t>(t.to)]);
            }
            std::vector<std::pair<SymbolId, std::set<int>>> flat(succ.begin(), succ.end());
            auto [it, _] = sig_ids.emplace(
                std::make_pair(block[static_cast<std::size_t>(v)], std::move(flat)),
                static_cast<int>(sig_ids.size()));
            next[static_cast<std::size_t>(v)] = it->second;
        }
        if (next == block) break;
        block = std::move(next);
    }

    int blocks = n == 0 ? 0 : *std::max_element(block.begin(), block.end()) + 1;
    UntimedAutomaton out;
    out.alphabet = a.alphabet;
    out.mode = a.mode;
    std::vector<StateId> rep(static_cast<std::size_t>(blocks), -1);
    for (int v = 0; v < n; ++v)
        if (rep[static_cast<std::size_t>(block[static_cast<std::size_t>(v)])] == -1)
            rep[static_cast<std::size_t>(block[static_cast<std::size_t>(v)])] = v;
    for (int b = 0; b < blocks; ++b)
        out.add_state(a.states[static_cast<std::size_t>(rep[static_cast<std::size_t>(b)])]);
    for (StateId s : a.initial) out.initial.insert(block[static_cast<std::size_t>(s)]);
    if (a.mode == AcceptanceMode::GenBuchi) {
        out.gen_final.resize(n_sets);
        for (std::size_t s = 0; s < n_sets; ++s)
            for (StateId v : a.gen_final[s]) out.gen_final[s].insert(block[static_cast<std::size_t>(v)]);
    } else {
        for (StateId v : a.final) out.final.insert(block[static_cast<std::size_t>(v)]);
    }
    std::set<std::tuple<StateId, SymbolId, StateId>> edges;
    for (const auto& t : a.transitions)
        edges.insert({block[static_cast<std::size_t>(t.from)], *t.label,
                      block[static_cast<std::size_t>(t.to)]});
    for (const auto& [f, s, to] : edges) out.add_transition(f, s, to);
    return out;
}

}  // namespace tsyn
