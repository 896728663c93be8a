#include <doctest.h>

#include <random>

#include "tsyn/omega.hpp"
#include "tsyn/synthesis.hpp"

using namespace tsyn;

namespace {

// Player I wins when Player II answers ok before time 1 or bad at or after
// time 1; Player II must answer bad early and ok late.
GameSpec deadline_game() {
    GameSpec g;
    g.player1 = {"a"};
    g.player2 = {"bad", "ok"};
    TimedAutomaton w;
    w.alphabet = {"a|bad", "a|ok"};
    w.clocks = ClockSet({"t"});
    w.locations = {"watch", "won"};
    w.initial = {0};
    w.final = {1};
    w.mode = AcceptanceMode::Buchi;
    SymbolId bad = 0, ok = 1;
    w.add_transition(0, bad, ClockConstraint::truth(), ClockSubset::none(), 0);
    w.add_transition(0, ok, ClockConstraint::truth(), ClockSubset::none(), 0);
    w.add_transition(0, ok, ClockConstraint::atom(0, Rel::Lt, 1), ClockSubset::none(), 1);
    w.add_transition(0, bad, ClockConstraint::atom(0, Rel::Ge, 1), ClockSubset::none(), 1);
    w.add_transition(1, bad, ClockConstraint::truth(), ClockSubset::none(), 1);
    w.add_transition(1, ok, ClockConstraint::truth(), ClockSubset::none(), 1);
    g.condition = std::move(w);
    return g;
}

GameSpec trivial_game(bool universal) {
    GameSpec g;
    g.player1 = {"a"};
    g.player2 = {"b"};
    TimedAutomaton w;
    w.alphabet = {"a|b"};
    w.clocks = ClockSet(std::vector<std::string>{});
    w.locations = {"q"};
    w.initial = {0};
    w.mode = AcceptanceMode::Buchi;
    if (universal) w.final = {0};
    w.add_transition(0, 0, ClockConstraint::truth(), ClockSubset::none(), 0);
    g.condition = std::move(w);
    return g;
}

}  // namespace

TEST_CASE("collapse recurrence") {
    // flags 1,0: times 0, 1/2 collapse to 0, 0
    auto out = collapse_timestamps({Rational(0), Rational(1, 2)}, {true, false});
    CHECK(out == std::vector<Rational>({Rational(0), Rational(0)}));
    auto idf = collapse_timestamps({Rational(0), Rational(1), Rational(2)}, {true, true, true});
    CHECK(idf == std::vector<Rational>({Rational(0), Rational(1), Rational(2)}));
    auto mix = collapse_timestamps({Rational(1, 2), Rational(1), Rational(3, 2)},
                                   {false, false, true});
    CHECK(mix == std::vector<Rational>({Rational(1, 2), Rational(1, 2), Rational(3, 2)}));
}

TEST_CASE("zero-starting transform surgery") {
    GameSpec g = deadline_game();
    GameSpec z = zero_starting_transform(g);
    CHECK(z.zero_starting);
    CHECK(z.player1.size() == 2);
    std::string start = z.player1.back();

    // untimed membership through the region pipeline: the start letter must
    // come first; words not starting with it are rejected
    UntimedAutomaton r = bisim_quotient(trim_omega(
        degeneralize(region_automaton(degeneralize_ta(z.condition), z.condition.max_constant()))));
    CHECK(accepts_lasso(r, {{start + "|ok"}, {"a|bad"}}));  // bad late: Player I wins
    CHECK_FALSE(accepts_lasso(r, {{}, {"a|bad"}}));         // no start letter
    CHECK_FALSE(accepts_lasso(r, {{start + "|ok"}, {start + "|ok"}}));  // start replayed mid-word
}

TEST_CASE("strict-monotonicity transform collapses flagged-0 letters") {
    GameSpec g2 = strict_monotonic_transform(zero_starting_transform(deadline_game()));
    CHECK(g2.strictly_monotonic);
    std::string start = "start";

    UntimedAutomaton r = bisim_quotient(trim_omega(degeneralize(
        region_automaton(degeneralize_ta(g2.condition), g2.condition.max_constant()))));

    // all-flag-1 plays can realize "bad at or after 1"
    CHECK(accepts_lasso(r, {{start + "#1|ok"}, {"a#1|bad"}}));
    // flag-0 letters stay at collapsed time 0 forever: bad never happens at
    // a collapsed time >= 1, and ok at collapsed time 0 gives the win too
    CHECK(accepts_lasso(r, {{start + "#1|bad"}, {"a#0|ok"}}));
    // collapsed-early bad never reaches time 1; all-ok-late never errs:
    CHECK_FALSE(accepts_lasso(r, {{start + "#1|bad"}, {"a#0|bad"}}));
}

TEST_CASE("strict transform rejects guarded epsilon") {
    GameSpec g = trivial_game(true);
    TimedAutomaton& w = g.condition;
    w.clocks = ClockSet({"x"});
    w.add_transition(0, std::nullopt, ClockConstraint::atom(0, Rel::Eq, 1), ClockSubset::none(), 0);
    CHECK_THROWS_AS(strict_monotonic_transform(g), PreconditionError);
}

TEST_CASE("protocol condition containment: the chain escape implies every bounded one") {
    GameSpec g2 = strict_monotonic_transform_impl(zero_starting_transform(deadline_game()), false);
    int k = 1;
    TimedAutomaton wdp = build_Wdoubleprime(g2, k);
    TimedAutomaton wp2 = build_Wprime(g2, k, 2);
    TimedAutomaton wp3 = build_Wprime(g2, k, 3);

    auto pipeline = [](const TimedAutomaton& w) {
        UntimedAutomaton n = region_automaton(degeneralize_ta(w),
                                              std::max<std::int64_t>(w.max_constant(), 0));
        n = degeneralize(n);
        if (n.has_epsilon()) n = remove_epsilon(n);
        return bisim_quotient(trim_omega(n));
    };
    UntimedAutomaton ndp = pipeline(wdp);
    UntimedAutomaton np2 = pipeline(wp2);
    UntimedAutomaton np3 = pipeline(wp3);

    // lasso corpus over the shared enriched alphabet
    std::vector<std::string> alpha = ndp.alphabet;
    std::mt19937 rng(173);
    int in_dp = 0;
    for (int trial = 0; trial < 50; ++trial) {
        LassoWord u;
        int sl = static_cast<int>(rng() % 3);
        int ll = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < sl; ++i) u.stem.push_back(alpha[rng() % alpha.size()]);
        for (int i = 0; i < ll; ++i) u.loop.push_back(alpha[rng() % alpha.size()]);
        if (accepts_lasso(ndp, u)) {
            ++in_dp;
            CHECK(accepts_lasso(np2, u));
            CHECK(accepts_lasso(np3, u));
        }
    }
    // also check on honest protocol-style lassos so the corpus is not all
    // rejections: the all-proper honest play with no requests
    {
        LassoWord honest{{"start#1/f0|ok/none"}, {"a#1/f0|ok/none"}};
        if (accepts_lasso(ndp, honest)) {
            CHECK(accepts_lasso(np2, honest));
            CHECK(accepts_lasso(np3, honest));
        }
        ++in_dp;
    }
    CHECK(in_dp >= 1);
}

TEST_CASE("solve_km trivial conditions") {
    SynthesisOptions opts;
    auto win = solve_km(trivial_game(false), 1, 1, opts);
    CHECK(win.has_value());
    auto lose = solve_km(trivial_game(true), 1, 1, opts);
    CHECK_FALSE(lose.has_value());
    auto win0 = solve_km(trivial_game(false), 0, 0, opts);
    CHECK(win0.has_value());
    auto lose0 = solve_km(trivial_game(true), 0, 0, opts);
    CHECK_FALSE(lose0.has_value());
}

TEST_CASE("deadline game: winnable with one clock, not with zero") {
    GameSpec g = deadline_game();
    SynthesisOptions opts;

    auto k0 = solve_km(g, 0, 0, opts);
    CHECK_FALSE(k0.has_value());

    auto k1 = solve_km(g, 1, 1, opts);
    REQUIRE(k1.has_value());
    // the controller was already verified by the closed loop; sanity-check a
    // conform run by hand: early letters answered bad, late ones ok
    auto run = simulate_controller(*k1, {{"a", Rational(1, 2)}, {"a", Rational(3, 2)},
                                         {"a", Rational(2)}});
    REQUIRE(run.steps.size() == 3);
    CHECK(run.steps[0].output == "bad");
    CHECK(run.steps[1].output == "ok");
    CHECK(run.steps[2].output == "ok");
    // boundary: exactly at time 1 the answer must be ok
    auto run2 = simulate_controller(*k1, {{"a", Rational(1)}});
    CHECK(run2.steps[0].output == "ok");
}

TEST_CASE("simulate_controller rejects non-monotone input") {
    GameSpec g = trivial_game(false);
    auto m = solve_km(g, 1, 1);
    REQUIRE(m.has_value());
    CHECK_THROWS_AS(simulate_controller(*m, {{"a", Rational(1)}, {"a", Rational(0)}}),
                    DomainError);
    auto empty_run = simulate_controller(*m, {});
    CHECK(empty_run.steps.empty());
}

TEST_CASE("verify_controller flags losing controllers") {
    GameSpec g = deadline_game();
    // a constant-ok controller loses (ok before time 1 is a Player I win)
    KMController bad;
    bad.inputs = g.player1;
    bad.outputs = g.player2;
    bad.clocks = ClockSet(std::vector<std::string>{});
    bad.max_constant = 0;
    bad.regions = enumerate_regions(0, 0);
    bad.memory_count = 1;
    bad.initial = 0;
    bad.update = {{0, 1, ClockSubset::none()}};  // always "ok"
    auto verdict = verify_controller(bad, g);
    CHECK_FALSE(verdict.winning);
    CHECK(verdict.counterexample.has_value());

    // constant-bad also loses
    bad.update = {{0, 0, ClockSubset::none()}};
    CHECK_FALSE(verify_controller(bad, g).winning);
}

TEST_CASE("solve_k returns the memory-derived bound") {
    GameSpec g = trivial_game(false);
    auto sol = solve_k(g, 1);
    REQUIRE(sol.has_value());
    CHECK(sol->m == static_cast<std::int64_t>(sol->enriched_inputs) * sol->untimed_memory + 1);
    // and solving at that (k, m) also succeeds
    CHECK(solve_km(g, 1, sol->m).has_value());

    auto lost = solve_k(trivial_game(true), 1);
    CHECK_FALSE(lost.has_value());
}

namespace {

// Player II must answer go exactly when the letter comes one unit after
// the previous one, wait otherwise. The condition resets a clock on every
// letter, which drives the collapsed-letter anchor machinery.
GameSpec gap_game() {
    GameSpec g;
    g.player1 = {"a"};
    g.player2 = {"go", "wait"};
    TimedAutomaton w;
    w.alphabet = {"a|go", "a|wait"};
    w.clocks = ClockSet({"y"});
    w.locations = {"track", "won"};
    w.initial = {0};
    w.final = {1};
    w.mode = AcceptanceMode::Buchi;
    SymbolId go = 0, wait = 1;
    auto at_one = ClockConstraint::atom(0, Rel::Eq, 1);
    w.add_transition(0, go, ClockConstraint::truth(), ClockSubset::single(0), 0);
    w.add_transition(0, wait, ClockConstraint::truth(), ClockSubset::single(0), 0);
    w.add_transition(0, wait, at_one, ClockSubset::none(), 1);
    w.add_transition(0, go, !at_one, ClockSubset::none(), 1);
    w.add_transition(1, go, ClockConstraint::truth(), ClockSubset::none(), 1);
    w.add_transition(1, wait, ClockConstraint::truth(), ClockSubset::none(), 1);
    g.condition = std::move(w);
    return g;
}

}  // namespace

TEST_CASE("gap game: a resetting condition synthesizes end to end") {
    GameSpec g = gap_game();
    auto k0 = solve_km(g, 0, 0);
    CHECK_FALSE(k0.has_value());

    auto k1 = solve_km(g, 1, 1);  // internally model-checked
    REQUIRE(k1.has_value());
    auto run = simulate_controller(
        *k1, {{"a", Rational(1)}, {"a", Rational(3, 2)}, {"a", Rational(5, 2)}, {"a", Rational(3)}});
    REQUIRE(run.steps.size() == 4);
    CHECK(run.steps[0].output == "go");    // gap exactly one (from time 0)
    CHECK(run.steps[1].output == "wait");  // gap one half
    CHECK(run.steps[2].output == "go");    // gap one
    CHECK(run.steps[3].output == "wait");  // gap one half
}

TEST_CASE("two-clock budget runs the whole pipeline") {
    // trivially winnable (empty condition): exercises the two-clock
    // enriched alphabet, monitors, completion, and lift
    GameSpec g = trivial_game(false);
    auto m = solve_km(g, 2, 1);
    REQUIRE(m.has_value());
    CHECK(m->clock_count() == 2);
    auto run = simulate_controller(*m, {{"a", Rational(1, 3)}, {"a", Rational(2)}});
    CHECK(run.steps.size() == 2);

    // and the universal condition stays unwinnable with two clocks
    CHECK_FALSE(solve_km(trivial_game(true), 2, 1).has_value());
}
