#include <doctest.h>

#include <random>

#include "tsyn/omega.hpp"
#include "tsyn/parity_game.hpp"

using namespace tsyn;

namespace {

// Brute force: enumerate all positional strategies of both players and
// evaluate the unique induced play from each vertex.
struct BruteForce {
    const ParityGame& g;

    explicit BruteForce(const ParityGame& game) : g(game) {}

    // winner of the play from v when both strategies are fixed
    Player play_winner(const std::vector<int>& sI, const std::vector<int>& sII, int v) const {
        std::vector<int> seen(static_cast<std::size_t>(g.size()), -1);
        std::vector<int> path;
        int cur = v;
        while (seen[static_cast<std::size_t>(cur)] == -1) {
            seen[static_cast<std::size_t>(cur)] = static_cast<int>(path.size());
            path.push_back(cur);
            cur = g.vertices[static_cast<std::size_t>(cur)].owner == Player::I
                      ? sI[static_cast<std::size_t>(cur)]
                      : sII[static_cast<std::size_t>(cur)];
        }
        int start = seen[static_cast<std::size_t>(cur)];
        int min_pri = INT_MAX;
        for (std::size_t i = static_cast<std::size_t>(start); i < path.size(); ++i)
            min_pri = std::min(min_pri, g.vertices[static_cast<std::size_t>(path[i])].priority);
        return min_pri % 2 == 0 ? Player::I : Player::II;
    }

    void all_strategies(Player who, std::vector<std::vector<int>>& out) const {
        std::vector<int> owned;
        for (int v = 0; v < g.size(); ++v)
            if (g.vertices[static_cast<std::size_t>(v)].owner == who) owned.push_back(v);
        std::vector<int> strat(static_cast<std::size_t>(g.size()), -1);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == owned.size()) {
                out.push_back(strat);
                return;
            }
            for (int w : g.edges[static_cast<std::size_t>(owned[i])]) {
                strat[static_cast<std::size_t>(owned[i])] = w;
                rec(i + 1);
            }
        };
        rec(0);
    }

    std::vector<Player> winners() const {
        std::vector<std::vector<int>> stratsI, stratsII;
        all_strategies(Player::I, stratsI);
        all_strategies(Player::II, stratsII);
        std::vector<Player> out(static_cast<std::size_t>(g.size()), Player::II);
        for (int v = 0; v < g.size(); ++v) {
            bool i_wins = false;
            for (const auto& sI : stratsI) {
                bool all = true;
                for (const auto& sII : stratsII)
                    if (play_winner(sI, sII, v) != Player::I) {
                        all = false;
                        break;
                    }
                if (all) {
                    i_wins = true;
                    break;
                }
            }
            out[static_cast<std::size_t>(v)] = i_wins ? Player::I : Player::II;
        }
        return out;
    }
};

ParityGame random_game(std::mt19937& rng, int max_v, int max_pri) {
    // random bipartite game; ensure totality
    ParityGame g;
    int nI = 1 + static_cast<int>(rng() % (max_v / 2));
    int nII = 1 + static_cast<int>(rng() % (max_v / 2));
    for (int i = 0; i < nI; ++i)
        g.vertices.push_back({Player::I, static_cast<int>(rng() % (max_pri + 1)), ""});
    for (int i = 0; i < nII; ++i)
        g.vertices.push_back({Player::II, static_cast<int>(rng() % (max_pri + 1)), ""});
    g.edges.resize(g.vertices.size());
    for (int v = 0; v < nI; ++v) {
        int deg = 1 + static_cast<int>(rng() % 2);
        for (int d = 0; d < deg; ++d) g.edges[static_cast<std::size_t>(v)].push_back(nI + static_cast<int>(rng() % nII));
    }
    for (int v = nI; v < nI + nII; ++v) {
        int deg = 1 + static_cast<int>(rng() % 2);
        for (int d = 0; d < deg; ++d) g.edges[static_cast<std::size_t>(v)].push_back(static_cast<int>(rng() % nI));
    }
    g.initial = 0;
    return g;
}

}  // namespace

TEST_CASE("single-vertex self-loops") {
    // self-loop priority 0, owner I: min-even, Player I wins
    ParityGame g;
    g.vertices.push_back({Player::I, 0, ""});
    g.vertices.push_back({Player::II, 0, ""});
    g.edges = {{1}, {0}};
    auto sol = solve_parity(g);
    CHECK(sol.winner[0] == Player::I);

    ParityGame h;
    h.vertices.push_back({Player::I, 1, ""});
    h.vertices.push_back({Player::II, 1, ""});
    h.edges = {{1}, {0}};
    auto sol2 = solve_parity(h);
    CHECK(sol2.winner[0] == Player::II);
}

TEST_CASE("solver matches brute force on random games") {
    std::mt19937 rng(149);
    for (int trial = 0; trial < 300; ++trial) {
        ParityGame g = random_game(rng, 6, 3);
        auto sol = solve_parity(g);
        auto expect = BruteForce(g).winners();
        for (int v = 0; v < g.size(); ++v) REQUIRE(sol.winner[static_cast<std::size_t>(v)] == expect[static_cast<std::size_t>(v)]);
    }
}

TEST_CASE("returned strategies win their regions") {
    std::mt19937 rng(151);
    for (int trial = 0; trial < 150; ++trial) {
        ParityGame g = random_game(rng, 6, 3);
        auto sol = solve_parity(g);
        BruteForce bf(g);
        // fix the winner's strategy and let the loser try everything
        std::vector<std::vector<int>> stratsI, stratsII;
        bf.all_strategies(Player::I, stratsI);
        bf.all_strategies(Player::II, stratsII);
        for (int v = 0; v < g.size(); ++v) {
            Player w = sol.winner[static_cast<std::size_t>(v)];
            if (w == Player::I) {
                for (const auto& sII : stratsII)
                    REQUIRE(bf.play_winner(sol.strategy_even, sII, v) == Player::I);
            } else {
                for (const auto& sI : stratsI)
                    REQUIRE(bf.play_winner(sI, sol.strategy_odd, v) == Player::II);
            }
        }
    }
}

TEST_CASE("synthesis arena shape") {
    // one-state parity automaton over pairs
    ParityAutomaton p;
    p.alphabet = {"a|b", "a|c"};
    p.states = {"s"};
    p.initial = 0;
    p.priority = {1};
    p.delta = {0, 0};
    ParityGame g = build_synthesis_arena(p, {"a"}, {"b", "c"});
    CHECK(g.size() == 2);  // 1 + |A| vertices
    CHECK(g.edges[1].size() == 2);
    g.validate();
    for (std::size_t v = 0; v < g.edges.size(); ++v)
        for (int w : g.edges[v])
            CHECK(g.vertices[static_cast<std::size_t>(w)].owner != g.vertices[v].owner);
}

TEST_CASE("decide_00 on trivial conditions") {
    // empty condition: any controller wins
    UntimedAutomaton empty;
    empty.alphabet = {"a|b"};
    empty.mode = AcceptanceMode::Buchi;
    empty.add_state("q");
    empty.initial = {0};
    empty.add_transition(0, 0, 0);
    auto m = decide_00_synthesis({"a"}, {"b"}, empty);
    CHECK(m.has_value());

    // universal condition: unavoidable
    UntimedAutomaton uni;
    uni.alphabet = {"a|b"};
    uni.mode = AcceptanceMode::Buchi;
    uni.add_state("q");
    uni.initial = {0};
    uni.final = {0};
    uni.add_transition(0, 0, 0);
    CHECK_FALSE(decide_00_synthesis({"a"}, {"b"}, uni).has_value());
}

TEST_CASE("decide_00 avoids a bad output") {
    // W: some (a, bad) occurs
    UntimedAutomaton w;
    w.alphabet = {"a|bad", "a|ok"};
    w.mode = AcceptanceMode::Buchi;
    w.add_state("watch");
    w.add_state("hit");
    w.initial = {0};
    w.final = {1};
    w.add_transition(0, 1, 0);
    w.add_transition(0, 0, 1);
    w.add_transition(1, 0, 1);
    w.add_transition(1, 1, 1);
    auto m = decide_00_synthesis({"a"}, {"bad", "ok"}, w);
    REQUIRE(m.has_value());
    // the controller always answers ok
    int mem = m->initial;
    for (int i = 0; i < 5; ++i) {
        auto [nx, out] = m->step(mem, 0);
        CHECK(m->outputs[static_cast<std::size_t>(out)] == "ok");
        mem = nx;
    }
}

TEST_CASE("decide_00 agreement with arena brute force") {
    // random small conditions over one input and two outputs
    std::mt19937 rng(157);
    for (int trial = 0; trial < 30; ++trial) {
        UntimedAutomaton w;
        w.alphabet = {"a|x", "a|y"};
        w.mode = AcceptanceMode::Buchi;
        int states = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < states; ++i) w.add_state("s" + std::to_string(i));
        w.initial = {0};
        for (int i = 0; i < states; ++i)
            if (rng() % 2) w.final.insert(i);
        int trans = 1 + static_cast<int>(rng() % (2 * states));
        for (int i = 0; i < trans; ++i)
            w.add_transition(static_cast<StateId>(rng() % states), static_cast<SymbolId>(rng() % 2),
                             static_cast<StateId>(rng() % states));

        auto got = decide_00_synthesis({"a"}, {"x", "y"}, w);

        // oracle: solve the arena of the determinized condition by brute force
        UntimedAutomaton prepared = w;
        ParityAutomaton p = determinize(bisim_quotient(trim_omega(prepared.has_epsilon() ? remove_epsilon(prepared) : prepared)));
        // pad alphabet if trimming dropped everything
        if (p.state_count() > 0 && p.alphabet.size() == 2) {
            ParityGame g = build_synthesis_arena(p, {"a"}, {"x", "y"});
            if (g.size() <= 30) {
                auto winners = BruteForce(g).winners();
                CHECK(got.has_value() == (winners[static_cast<std::size_t>(g.initial)] == Player::II));
            }
        }
    }
}
