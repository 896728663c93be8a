#include "tsyn/fixtures.hpp"

#include "tsyn/errors.hpp"

namespace tsyn {

TimedAutomaton fixture_example_L() {
    TimedAutomaton a;
    a.alphabet = {"a"};
    a.clocks = ClockSet({"x"});
    a.locations = {"p", "q", "r"};
    a.initial = {0};
    a.final = {2};
    a.mode = AcceptanceMode::Finite;
    a.add_transition(0, 0, ClockConstraint::truth(), ClockSubset::none(), 0);
    a.add_transition(0, 0, ClockConstraint::truth(), ClockSubset::single(0), 1);
    a.add_transition(1, 0, ClockConstraint::atom(0, Rel::Lt, 1), ClockSubset::none(), 1);
    a.add_transition(1, 0, ClockConstraint::atom(0, Rel::Eq, 1), ClockSubset::none(), 2);
    return a;
}

TimedAutomaton fixture_example_L_complement() {
    TimedAutomaton a;
    a.alphabet = {"a"};
    a.clocks = ClockSet({"x", "y"});
    a.mode = AcceptanceMode::Finite;
    // mode 1: length at most one
    LocationId s0 = a.add_location("s0");
    LocationId one = a.add_location("one");
    // mode 2: everything within one unit of the first letter
    LocationId near = a.add_location("near");
    // mode 3: guess an adjacent pair straddling the unit before the end
    LocationId c0 = a.add_location("c0");
    LocationId c1 = a.add_location("c1");
    LocationId c2 = a.add_location("c2");
    LocationId c3 = a.add_location("c3");
    a.initial = {s0, c0};
    a.final = {s0, one, near, c3};
    SymbolId sa = 0;
    ClockId x = 0, y = 1;

    a.add_transition(s0, sa, ClockConstraint::truth(), ClockSubset::single(x), one);
    a.add_transition(one, sa, ClockConstraint::atom(x, Rel::Lt, 1), ClockSubset::none(), near);
    a.add_transition(near, sa, ClockConstraint::atom(x, Rel::Lt, 1), ClockSubset::none(), near);

    a.add_transition(c0, sa, ClockConstraint::truth(), ClockSubset::none(), c0);
    a.add_transition(c0, sa, ClockConstraint::truth(), ClockSubset::single(x), c1);
    a.add_transition(c1, sa, ClockConstraint::truth(), ClockSubset::single(y), c2);
    a.add_transition(c2, sa, ClockConstraint::truth(), ClockSubset::none(), c2);
    a.add_transition(c2, sa,
                     ClockConstraint::atom(x, Rel::Gt, 1) && ClockConstraint::atom(y, Rel::Lt, 1),
                     ClockSubset::none(), c3);
    // the guessed pair may be the last two letters
    a.add_transition(c1, sa, ClockConstraint::atom(x, Rel::Gt, 1), ClockSubset::none(), c3);

    // mode 4: the final timestamp is duplicated, which blocks every
    // accepting run of the unit-gap automaton (the in-between letter sits
    // exactly at the accepting boundary)
    LocationId d1 = a.add_location("d1");
    LocationId d2 = a.add_location("d2");
    a.final.insert(d2);
    a.add_transition(c0, sa, ClockConstraint::truth(), ClockSubset::single(y), d1);
    a.add_transition(d1, sa, ClockConstraint::atom(y, Rel::Eq, 0), ClockSubset::none(), d2);
    a.add_transition(d2, sa, ClockConstraint::atom(y, Rel::Eq, 0), ClockSubset::none(), d2);
    return a;
}

TimedAutomaton fixture_example_Lk(int k) {
    if (k < 0) throw DomainError("negative counter width");
    if (k > 8) throw DomainError("counter width too large for a fixture");
    TimedAutomaton a;
    a.alphabet = {"a"};
    std::vector<std::string> clocks;
    for (int j = 0; j <= k; ++j) clocks.push_back("x" + std::to_string(j));
    for (int j = 0; j <= k; ++j) clocks.push_back("y" + std::to_string(j));
    a.clocks = ClockSet(clocks);
    auto xc = [&](int j) { return static_cast<ClockId>(j); };
    auto yc = [&](int j) { return static_cast<ClockId>(k + 1 + j); };

    LocationId start = a.add_location("start");
    LocationId pre = a.add_location("pre");
    LocationId cnt = a.add_location("cnt");
    LocationId acc = a.add_location("acc");
    a.initial = {start};
    a.final = {acc};
    SymbolId sa = 0;

    ClockConstraint strict = ClockConstraint::atom(xc(0), Rel::Gt, 0);
    ClockSubset tick0 = ClockSubset::single(xc(0));

    // bit j reads one when x_j and y_j were last reset together; untouched
    // pairs read one, so the counter starts at all-ones and counts down
    auto bit_one = [&](int j) { return ClockConstraint::diff_atom(xc(j), yc(j), Rel::Eq, 0); };

    a.add_transition(start, sa, ClockConstraint::truth(), tick0, pre);
    a.add_transition(pre, sa, strict, tick0, pre);
    // guess the anchor letter: reset y0 (and x0 for strictness)
    a.add_transition(start, sa, ClockConstraint::truth(), tick0.with(yc(0)), cnt);
    a.add_transition(pre, sa, strict, tick0.with(yc(0)), cnt);
    // decrement: lowest one-bit goes to zero, all bits below go to one
    for (int j = 1; j <= k; ++j) {
        ClockConstraint guard = strict && bit_one(j);
        ClockSubset resets = tick0.with(xc(j));
        for (int l = 1; l < j; ++l) {
            guard = guard && !bit_one(l);
            resets = resets.with(xc(l)).with(yc(l));
        }
        a.add_transition(cnt, sa, guard, resets, cnt);
    }
    // all bits zero and the anchor expired: the final letter
    ClockConstraint done = strict && ClockConstraint::atom(yc(0), Rel::Eq, 1);
    for (int j = 1; j <= k; ++j) done = done && !bit_one(j);
    a.add_transition(cnt, sa, done, ClockSubset::none(), acc);
    return a;
}

TimedAutomaton fixture_point_a() {
    TimedAutomaton a;
    a.alphabet = {"a"};
    a.clocks = ClockSet({"x"});
    a.locations = {"i", "f"};
    a.initial = {0};
    a.final = {1};
    a.add_transition(0, 0, ClockConstraint::atom(0, Rel::Eq, 1), ClockSubset::none(), 1);
    return a;
}

TimedAutomaton fixture_point_b() {
    TimedAutomaton b = fixture_point_a();
    b.transitions[0].guard = ClockConstraint::atom(0, Rel::Eq, 2);
    return b;
}

GameSpec fixture_deadline_game() {
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

}  // namespace tsyn
