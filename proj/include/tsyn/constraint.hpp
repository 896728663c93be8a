#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tsyn/clocks.hpp"
#include "tsyn/rational.hpp"

namespace tsyn {

enum class Rel { Eq, Lt, Le, Gt, Ge };

// Quantifier-free clock constraint over atoms  x ~ z  and  x - y ~ z
// with integer z, closed under !, &&, ||. Immutable; nodes are shared.
class ClockConstraint {
  public:
    enum class Kind { True, False, Atom, DiffAtom, Not, And, Or };

    struct Node {
        Kind kind;
        // Atom / DiffAtom:
        ClockId x = -1;
        ClockId y = -1;  // DiffAtom only
        Rel rel = Rel::Eq;
        std::int64_t bound = 0;
        // Not / And / Or:
        std::shared_ptr<const Node> a;
        std::shared_ptr<const Node> b;
    };

    static ClockConstraint truth() { return leaf(Kind::True); }
    static ClockConstraint falsity() { return leaf(Kind::False); }
    static ClockConstraint atom(ClockId x, Rel r, std::int64_t z) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Atom;
        n->x = x;
        n->rel = r;
        n->bound = z;
        return ClockConstraint(std::move(n));
    }
    static ClockConstraint diff_atom(ClockId x, ClockId y, Rel r, std::int64_t z) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::DiffAtom;
        n->x = x;
        n->y = y;
        n->rel = r;
        n->bound = z;
        return ClockConstraint(std::move(n));
    }

    ClockConstraint operator!() const {
        if (root_->kind == Kind::True) return falsity();
        if (root_->kind == Kind::False) return truth();
        auto n = std::make_shared<Node>();
        n->kind = Kind::Not;
        n->a = root_;
        return ClockConstraint(std::move(n));
    }
    ClockConstraint operator&&(const ClockConstraint& o) const {
        if (root_->kind == Kind::True) return o;
        if (o.root_->kind == Kind::True) return *this;
        if (root_->kind == Kind::False || o.root_->kind == Kind::False) return falsity();
        auto n = std::make_shared<Node>();
        n->kind = Kind::And;
        n->a = root_;
        n->b = o.root_;
        return ClockConstraint(std::move(n));
    }
    ClockConstraint operator||(const ClockConstraint& o) const {
        if (root_->kind == Kind::False) return o;
        if (o.root_->kind == Kind::False) return *this;
        if (root_->kind == Kind::True || o.root_->kind == Kind::True) return truth();
        auto n = std::make_shared<Node>();
        n->kind = Kind::Or;
        n->a = root_;
        n->b = o.root_;
        return ClockConstraint(std::move(n));
    }

    const Node& root() const { return *root_; }
    bool is_true() const { return root_->kind == Kind::True; }
    bool is_false() const { return root_->kind == Kind::False; }

    // Largest clock index mentioned, or -1.
    ClockId max_clock() const;
    // Largest absolute constant mentioned, 0 for constant formulas.
    std::int64_t max_constant() const;
    // Every atom's clocks remapped through `map` (old index -> new index).
    ClockConstraint remap_clocks(const std::vector<ClockId>& map) const;

    std::string str(const ClockSet& clocks) const;

    ClockConstraint() : root_(truth().root_) {}

  private:
    static ClockConstraint leaf(Kind k) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        return ClockConstraint(std::move(n));
    }
    explicit ClockConstraint(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
    std::shared_ptr<const Node> root_;
};

bool rel_holds(const Rational& lhs, Rel r, std::int64_t z);

// Standard semantics: true iff v satisfies c. Clocks of c must be within v.
bool eval_constraint(const ClockValuation& v, const ClockConstraint& c);

// Concrete syntax: atoms `x - y <= 3`, `x >= 1`, `x = 0`; operators
// `!`, `&&`, `||`, parentheses, literals `true`/`false`.
ClockConstraint parse_constraint(const std::string& text, const ClockSet& clocks);

}  // namespace tsyn
