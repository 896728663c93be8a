#include <doctest.h>

#include "tsyn/constraint.hpp"

using namespace tsyn;

namespace {
ClockValuation val(std::vector<Rational> v) { return ClockValuation(std::move(v)); }
}  // namespace

TEST_CASE("constraint evaluation on atoms and connectives") {
    ClockSet cs({"x", "y"});
    ClockId x = 0, y = 1;

    CHECK(eval_constraint(val({Rational(0), Rational(0)}), ClockConstraint::atom(x, Rel::Eq, 0)));
    // y - x = 1 and x < 1 at (1/2, 3/2)
    auto c = ClockConstraint::diff_atom(y, x, Rel::Eq, 1) && ClockConstraint::atom(x, Rel::Lt, 1);
    CHECK(eval_constraint(val({Rational(1, 2), Rational(3, 2)}), c));
    // !(x <= 1 || x >= 3) at x = 2
    auto d = !(ClockConstraint::atom(x, Rel::Le, 1) || ClockConstraint::atom(x, Rel::Ge, 3));
    CHECK(eval_constraint(val({Rational(2), Rational(0)}), d));
    CHECK_FALSE(eval_constraint(val({Rational(3), Rational(0)}), d));
}

TEST_CASE("constraint parser round-trips the concrete syntax") {
    ClockSet cs({"x", "y"});
    auto c = parse_constraint("x - y <= 3 && !(y = 0) || true && x >= 1", cs);
    // reparse of the printed form evaluates identically on samples
    auto printed = c.str(cs);
    auto c2 = parse_constraint(printed, cs);
    for (int a = 0; a <= 4; ++a) {
        for (int b = 0; b <= 4; ++b) {
            auto v = val({Rational(a, 2), Rational(b, 2)});
            CHECK(eval_constraint(v, c) == eval_constraint(v, c2));
        }
    }
}

TEST_CASE("constraint parser reports positions") {
    ClockSet cs({"x"});
    CHECK_THROWS_AS(parse_constraint("x <", cs), ParseError);
    CHECK_THROWS_AS(parse_constraint("z = 0", cs), ParseError);
    CHECK_THROWS_AS(parse_constraint("x = 0 x", cs), ParseError);
    CHECK(parse_constraint("  x   =   0  ", cs).str(cs) == "x = 0");
}

TEST_CASE("unknown clock in evaluation is a domain error") {
    ClockSet cs({"x", "y"});
    auto c = ClockConstraint::atom(1, Rel::Eq, 0);
    CHECK_THROWS_AS(eval_constraint(val({Rational(0)}), c), DomainError);
}

TEST_CASE("max clock and max constant") {
    auto c = ClockConstraint::diff_atom(0, 2, Rel::Lt, -4) && ClockConstraint::atom(1, Rel::Gt, 2);
    CHECK(c.max_clock() == 2);
    CHECK(c.max_constant() == 4);
    CHECK(ClockConstraint::truth().max_clock() == -1);
    CHECK(ClockConstraint::truth().max_constant() == 0);
}
