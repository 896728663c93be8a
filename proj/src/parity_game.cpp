#include "tsyn/parity_game.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "tsyn/errors.hpp"
#include "tsyn/omega.hpp"

namespace tsyn {

void ParityGame::validate() const {
    if (edges.size() != vertices.size()) throw DomainError("edge table size mismatch");
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        if (edges[v].empty()) throw DomainError("game vertex without moves");
        for (int w : edges[v]) {
            if (w < 0 || w >= size()) throw DomainError("edge outside vertex set");
            if (vertices[static_cast<std::size_t>(w)].owner == vertices[v].owner)
                throw DomainError("owners must alternate");
        }
    }
}

void MealyController::validate() const {
    if (update.size() != static_cast<std::size_t>(memory_count) * inputs.size())
        throw DomainError("controller update is not total");
    for (const auto& [m, o] : update) {
        if (m < 0 || m >= memory_count) throw DomainError("controller memory out of range");
        if (o < 0 || o >= static_cast<int>(outputs.size()))
            throw DomainError("controller output out of range");
    }
}

namespace {

// attractor of `target` for player `who` within the `alive` subgame
std::vector<bool> attractor(const ParityGame& g, const std::vector<bool>& alive,
                            std::vector<bool> target, Player who,
                            std::vector<int>* strategy) {
    int n = g.size();
    // predecessor lists and live out-degrees
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
    std::vector<int> out_deg(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        if (!alive[static_cast<std::size_t>(v)]) continue;
        for (int w : g.edges[static_cast<std::size_t>(v)]) {
            if (!alive[static_cast<std::size_t>(w)]) continue;
            preds[static_cast<std::size_t>(w)].push_back(v);
            out_deg[static_cast<std::size_t>(v)]++;
        }
    }
    std::deque<int> work;
    for (int v = 0; v < n; ++v)
        if (alive[static_cast<std::size_t>(v)] && target[static_cast<std::size_t>(v)]) work.push_back(v);
    std::vector<int> remaining = out_deg;
    while (!work.empty()) {
        int w = work.front();
        work.pop_front();
        for (int v : preds[static_cast<std::size_t>(w)]) {
            if (target[static_cast<std::size_t>(v)]) continue;
            if (g.vertices[static_cast<std::size_t>(v)].owner == who) {
                target[static_cast<std::size_t>(v)] = true;
                if (strategy && (*strategy)[static_cast<std::size_t>(v)] == -1)
                    (*strategy)[static_cast<std::size_t>(v)] = w;
                work.push_back(v);
            } else {
                if (--remaining[static_cast<std::size_t>(v)] == 0) {
                    target[static_cast<std::size_t>(v)] = true;
                    work.push_back(v);
                }
            }
        }
    }
    return target;
}

void solve_rec(const ParityGame& g, const std::vector<bool>& alive, std::vector<Player>& winner,
               std::vector<int>& strat_even, std::vector<int>& strat_odd) {
    int n = g.size();
    int min_pri = INT_MAX;
    for (int v = 0; v < n; ++v)
        if (alive[static_cast<std::size_t>(v)])
            min_pri = std::min(min_pri, g.vertices[static_cast<std::size_t>(v)].priority);
    if (min_pri == INT_MAX) return;  // empty subgame

    Player sigma = (min_pri % 2 == 0) ? Player::I : Player::II;
    Player opp = sigma == Player::I ? Player::II : Player::I;
    auto& strat_sigma = sigma == Player::I ? strat_even : strat_odd;
    auto& strat_opp = sigma == Player::I ? strat_odd : strat_even;

    std::vector<bool> top(static_cast<std::size_t>(n), false);
    for (int v = 0; v < n; ++v)
        if (alive[static_cast<std::size_t>(v)] &&
            g.vertices[static_cast<std::size_t>(v)].priority == min_pri)
            top[static_cast<std::size_t>(v)] = true;

    std::vector<int> attr_strat(static_cast<std::size_t>(n), -1);
    std::vector<bool> a = attractor(g, alive, top, sigma, &attr_strat);

    std::vector<bool> rest = alive;
    for (int v = 0; v < n; ++v)
        if (a[static_cast<std::size_t>(v)]) rest[static_cast<std::size_t>(v)] = false;

    std::vector<Player> sub_winner(static_cast<std::size_t>(n), sigma);
    std::vector<int> sub_even(static_cast<std::size_t>(n), -1),
        sub_odd(static_cast<std::size_t>(n), -1);
    solve_rec(g, rest, sub_winner, sub_even, sub_odd);

    bool opp_wins_some = false;
    for (int v = 0; v < n; ++v)
        if (rest[static_cast<std::size_t>(v)] && sub_winner[static_cast<std::size_t>(v)] == opp)
            opp_wins_some = true;

    if (!opp_wins_some) {
        // sigma wins everywhere: recursive strategy on G\A, attractor
        // strategy on A\U, any live move on U
        const auto& sub_sigma = sigma == Player::I ? sub_even : sub_odd;
        for (int v = 0; v < n; ++v) {
            if (!alive[static_cast<std::size_t>(v)]) continue;
            winner[static_cast<std::size_t>(v)] = sigma;
            if (g.vertices[static_cast<std::size_t>(v)].owner != sigma) continue;
            int pick = -1;
            if (rest[static_cast<std::size_t>(v)]) pick = sub_sigma[static_cast<std::size_t>(v)];
            if (pick == -1) pick = attr_strat[static_cast<std::size_t>(v)];
            if (pick == -1)
                for (int w : g.edges[static_cast<std::size_t>(v)])
                    if (alive[static_cast<std::size_t>(w)]) {
                        pick = w;
                        break;
                    }
            strat_sigma[static_cast<std::size_t>(v)] = pick;
        }
        return;
    }

    // opp keeps its subgame region plus its attractor; re-solve the rest
    std::vector<bool> opp_region(static_cast<std::size_t>(n), false);
    for (int v = 0; v < n; ++v)
        if (rest[static_cast<std::size_t>(v)] && sub_winner[static_cast<std::size_t>(v)] == opp)
            opp_region[static_cast<std::size_t>(v)] = true;

    std::vector<int> opp_attr_strat(static_cast<std::size_t>(n), -1);
    std::vector<bool> b = attractor(g, alive, opp_region, opp, &opp_attr_strat);

    const auto& sub_opp = opp == Player::I ? sub_even : sub_odd;
    for (int v = 0; v < n; ++v) {
        if (!b[static_cast<std::size_t>(v)]) continue;
        winner[static_cast<std::size_t>(v)] = opp;
        if (g.vertices[static_cast<std::size_t>(v)].owner != opp) continue;
        if (opp_region[static_cast<std::size_t>(v)])
            strat_opp[static_cast<std::size_t>(v)] = sub_opp[static_cast<std::size_t>(v)];
        else if (opp_attr_strat[static_cast<std::size_t>(v)] != -1)
            strat_opp[static_cast<std::size_t>(v)] = opp_attr_strat[static_cast<std::size_t>(v)];
    }

    std::vector<bool> alive2 = alive;
    for (int v = 0; v < n; ++v)
        if (b[static_cast<std::size_t>(v)]) alive2[static_cast<std::size_t>(v)] = false;
    solve_rec(g, alive2, winner, strat_even, strat_odd);
}

}  // namespace

GameSolution solve_parity(const ParityGame& g) {
    g.validate();
    int n = g.size();
    GameSolution sol;
    sol.winner.assign(static_cast<std::size_t>(n), Player::I);
    sol.strategy_even.assign(static_cast<std::size_t>(n), -1);
    sol.strategy_odd.assign(static_cast<std::size_t>(n), -1);
    std::vector<bool> alive(static_cast<std::size_t>(n), true);
    solve_rec(g, alive, sol.winner, sol.strategy_even, sol.strategy_odd);
    // fill in arbitrary in-region moves where the recursion left gaps
    for (int v = 0; v < n; ++v) {
        Player owner = g.vertices[static_cast<std::size_t>(v)].owner;
        auto& strat = owner == Player::I ? sol.strategy_even : sol.strategy_odd;
        if (sol.winner[static_cast<std::size_t>(v)] != owner || strat[static_cast<std::size_t>(v)] != -1)
            continue;
        for (int w : g.edges[static_cast<std::size_t>(v)])
            if (sol.winner[static_cast<std::size_t>(w)] == owner) {
                strat[static_cast<std::size_t>(v)] = w;
                break;
            }
    }
    return sol;
}

ParityGame build_synthesis_arena(const ParityAutomaton& p, const std::vector<std::string>& inputs,
                                 const std::vector<std::string>& outputs) {
    p.validate();
    ParityGame g;
    int q_count = p.state_count();
    int in_count = static_cast<int>(inputs.size());
    // vertex layout: [0, q_count): Player I vertices (automaton states);
    // then (q, a) Player II vertices
    auto pII = [&](StateId q, int a) { return q_count + q * in_count + a; };
    for (StateId q = 0; q < q_count; ++q)
        g.vertices.push_back({Player::I, p.priority[static_cast<std::size_t>(q)], ""});
    for (StateId q = 0; q < q_count; ++q)
        for (int a = 0; a < in_count; ++a)
            g.vertices.push_back(
                {Player::II, p.priority[static_cast<std::size_t>(q)], inputs[static_cast<std::size_t>(a)]});
    g.edges.resize(g.vertices.size());
    for (StateId q = 0; q < q_count; ++q) {
        for (int a = 0; a < in_count; ++a) g.edges[static_cast<std::size_t>(q)].push_back(pII(q, a));
        for (int a = 0; a < in_count; ++a) {
            for (std::size_t b = 0; b < outputs.size(); ++b) {
                std::string sym = compose_symbol(inputs[static_cast<std::size_t>(a)],
                                                 outputs[b]);
                auto it = std::find(p.alphabet.begin(), p.alphabet.end(), sym);
                if (it == p.alphabet.end())
                    throw DomainError("arena: condition alphabet misses pair " + sym);
                SymbolId s = static_cast<SymbolId>(it - p.alphabet.begin());
                g.edges[static_cast<std::size_t>(pII(q, a))].push_back(p.next(q, s));
            }
        }
    }
    g.initial = p.initial;
    return g;
}

MealyController extract_mealy(const ParityGame& g, const GameSolution& sol,
                              const std::vector<std::string>& inputs,
                              const std::vector<std::string>& outputs) {
    if (sol.winner[static_cast<std::size_t>(g.initial)] != Player::II)
        throw PreconditionError("initial vertex is not winning for the controller");
    int in_count = static_cast<int>(inputs.size());
    int q_count = (g.size()) / (1 + in_count);  // arena layout from build_synthesis_arena

    MealyController m;
    m.inputs = inputs;
    m.outputs = outputs;
    m.memory_count = q_count;
    m.initial = g.initial;
    m.update.assign(static_cast<std::size_t>(q_count) * inputs.size(), {0, 0});
    for (StateId q = 0; q < q_count; ++q) {
        for (int a = 0; a < in_count; ++a) {
            int v = q_count + q * in_count + a;
            int choice = sol.strategy_odd[static_cast<std::size_t>(v)];
            if (choice == -1) {
                if (sol.winner[static_cast<std::size_t>(q)] == Player::II &&
                    sol.winner[static_cast<std::size_t>(v)] == Player::II)
                    throw InternalError("missing strategy inside the winning region");
                // outside the winning region: any move keeps the machine total
                choice = g.edges[static_cast<std::size_t>(v)].front();
            }
            // which output index leads to `choice`?
            int out_idx = -1;
            for (std::size_t b = 0; b < outputs.size(); ++b) {
                if (g.edges[static_cast<std::size_t>(v)][b] == choice) {
                    out_idx = static_cast<int>(b);
                    break;
                }
            }
            if (out_idx == -1) throw InternalError("strategy edge not found");
            m.update[static_cast<std::size_t>(q) * inputs.size() + static_cast<std::size_t>(a)] = {
                choice, out_idx};
        }
    }
    m.validate();
    return m;
}

std::optional<MealyController> decide_00_synthesis(const std::vector<std::string>& inputs,
                                                   const std::vector<std::string>& outputs,
                                                   const UntimedAutomaton& w_in,
                                                   std::size_t cap) {
    UntimedAutomaton w = w_in;
    if (w.mode == AcceptanceMode::GenBuchi) w = degeneralize(w);
    if (w.has_epsilon()) w = remove_epsilon(w);
    w = bisim_quotient(trim_omega(w));
    if (w.state_count() == 0) {
        // empty condition: any controller wins vacuously
        MealyController m;
        m.inputs = inputs;
        m.outputs = outputs;
        m.memory_count = 1;
        m.initial = 0;
        m.update.assign(inputs.size(), {0, 0});
        if (outputs.empty()) throw DomainError("controller needs at least one output");
        return m;
    }
    // ensure every pair symbol exists in the alphabet (totalize with a dead
    // state so determinization is over the full pair alphabet)
    UntimedAutomaton wt = w;
    for (const auto& a : inputs)
        for (const auto& b : outputs) {
            std::string sym = compose_symbol(a, b);
            if (std::find(wt.alphabet.begin(), wt.alphabet.end(), sym) == wt.alphabet.end())
                wt.alphabet.push_back(sym);
        }
    ParityAutomaton p = determinize(wt, cap);
    ParityGame g = build_synthesis_arena(p, inputs, outputs);
    GameSolution sol = solve_parity(g);
    if (sol.winner[static_cast<std::size_t>(g.initial)] != Player::II) return std::nullopt;
    return minimize_mealy(extract_mealy(g, sol, inputs, outputs));
}

MealyController minimize_mealy(const MealyController& m_in) {
    MealyController m = m_in;
    m.validate();
    // restrict to reachable memories first
    std::vector<int> remap(static_cast<std::size_t>(m.memory_count), -1);
    std::vector<int> order;
    remap[static_cast<std::size_t>(m.initial)] = 0;
    order.push_back(m.initial);
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t a = 0; a < m.inputs.size(); ++a) {
            int nx = m.step(order[i], static_cast<int>(a)).first;
            if (remap[static_cast<std::size_t>(nx)] == -1) {
                remap[static_cast<std::size_t>(nx)] = static_cast<int>(order.size());
                order.push_back(nx);
            }
        }
    }

    int n = static_cast<int>(order.size());
    // partition refinement on (output row, successor blocks)
    std::vector<int> block(static_cast<std::size_t>(n), 0);
    {
        std::map<std::vector<int>, int> ids;
        for (int v = 0; v < n; ++v) {
            std::vector<int> sig;
            for (std::size_t a = 0; a < m.inputs.size(); ++a)
                sig.push_back(m.step(order[static_cast<std::size_t>(v)], static_cast<int>(a)).second);
            auto [it, _] = ids.emplace(sig, static_cast<int>(ids.size()));
            block[static_cast<std::size_t>(v)] = it->second;
        }
    }
    while (true) {
        std::map<std::vector<int>, int> ids;
        std::vector<int> next(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            std::vector<int> sig{block[static_cast<std::size_t>(v)]};
            for (std::size_t a = 0; a < m.inputs.size(); ++a) {
                auto [nx, out] = m.step(order[static_cast<std::size_t>(v)], static_cast<int>(a));
                sig.push_back(block[static_cast<std::size_t>(remap[static_cast<std::size_t>(nx)])]);
                sig.push_back(out);
            }
            auto [it, _] = ids.emplace(std::move(sig), static_cast<int>(ids.size()));
            next[static_cast<std::size_t>(v)] = it->second;
        }
        if (next == block) break;
        block = std::move(next);
    }
    int blocks = *std::max_element(block.begin(), block.end()) + 1;
    MealyController out;
    out.inputs = m.inputs;
    out.outputs = m.outputs;
    out.memory_count = blocks;
    out.initial = block[0];
    out.update.assign(static_cast<std::size_t>(blocks) * m.inputs.size(), {0, 0});
    for (int v = 0; v < n; ++v) {
        for (std::size_t a = 0; a < m.inputs.size(); ++a) {
            auto [nx, o] = m.step(order[static_cast<std::size_t>(v)], static_cast<int>(a));
            out.update[static_cast<std::size_t>(block[static_cast<std::size_t>(v)]) * m.inputs.size() +
                       a] = {block[static_cast<std::size_t>(remap[static_cast<std::size_t>(nx)])], o};
        }
    }
    out.validate();
    return out;
}

}  // namespace tsyn
