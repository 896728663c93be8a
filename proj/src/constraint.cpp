#include "tsyn/constraint.hpp"

#include <cctype>
#include <functional>

namespace tsyn {

bool rel_holds(const Rational& lhs, Rel r, std::int64_t z) {
    Rational rhs(z);
    switch (r) {
        case Rel::Eq: return lhs == rhs;
        case Rel::Lt: return lhs < rhs;
        case Rel::Le: return lhs <= rhs;
        case Rel::Gt: return lhs > rhs;
        case Rel::Ge: return lhs >= rhs;
    }
    return false;
}

namespace {

bool eval_node(const ClockConstraint::Node& n, const ClockValuation& v) {
    using Kind = ClockConstraint::Kind;
    switch (n.kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::Atom:
            if (n.x < 0 || n.x >= v.size()) throw DomainError("constraint mentions unknown clock");
            return rel_holds(v[n.x], n.rel, n.bound);
        case Kind::DiffAtom:
            if (n.x < 0 || n.x >= v.size() || n.y < 0 || n.y >= v.size())
                throw DomainError("constraint mentions unknown clock");
            return rel_holds(v[n.x] - v[n.y], n.rel, n.bound);
        case Kind::Not: return !eval_node(*n.a, v);
        case Kind::And: return eval_node(*n.a, v) && eval_node(*n.b, v);
        case Kind::Or: return eval_node(*n.a, v) || eval_node(*n.b, v);
    }
    return false;
}

const char* rel_text(Rel r) {
    switch (r) {
        case Rel::Eq: return "=";
        case Rel::Lt: return "<";
        case Rel::Le: return "<=";
        case Rel::Gt: return ">";
        case Rel::Ge: return ">=";
    }
    return "?";
}

}  // namespace

bool eval_constraint(const ClockValuation& v, const ClockConstraint& c) {
    return eval_node(c.root(), v);
}

ClockId ClockConstraint::max_clock() const {
    ClockId m = -1;
    std::function<void(const Node&)> walk = [&](const Node& n) {
        if (n.kind == Kind::Atom || n.kind == Kind::DiffAtom) {
            m = std::max(m, n.x);
            m = std::max(m, n.y);
        }
        if (n.a) walk(*n.a);
        if (n.b) walk(*n.b);
    };
    walk(*root_);
    return m;
}

std::int64_t ClockConstraint::max_constant() const {
    std::int64_t m = 0;
    std::function<void(const Node&)> walk = [&](const Node& n) {
        if (n.kind == Kind::Atom || n.kind == Kind::DiffAtom)
            m = std::max(m, n.bound < 0 ? -n.bound : n.bound);
        if (n.a) walk(*n.a);
        if (n.b) walk(*n.b);
    };
    walk(*root_);
    return m;
}

ClockConstraint ClockConstraint::remap_clocks(const std::vector<ClockId>& map) const {
    std::function<ClockConstraint(const Node&)> walk = [&](const Node& n) -> ClockConstraint {
        switch (n.kind) {
            case Kind::True: return truth();
            case Kind::False: return falsity();
            case Kind::Atom: return atom(map.at(static_cast<std::size_t>(n.x)), n.rel, n.bound);
            case Kind::DiffAtom:
                return diff_atom(map.at(static_cast<std::size_t>(n.x)),
                                 map.at(static_cast<std::size_t>(n.y)), n.rel, n.bound);
            case Kind::Not: return !walk(*n.a);
            case Kind::And: return walk(*n.a) && walk(*n.b);
            case Kind::Or: return walk(*n.a) || walk(*n.b);
        }
        return truth();
    };
    return walk(*root_);
}

std::string ClockConstraint::str(const ClockSet& clocks) const {
    // Parenthesization keeps the grammar round-trippable; no precedence games.
    std::function<std::string(const Node&, bool)> walk = [&](const Node& n, bool top) -> std::string {
        switch (n.kind) {
            case Kind::True: return "true";
            case Kind::False: return "false";
            case Kind::Atom:
                return clocks.name(n.x) + " " + rel_text(n.rel) + " " + std::to_string(n.bound);
            case Kind::DiffAtom:
                return clocks.name(n.x) + " - " + clocks.name(n.y) + " " + rel_text(n.rel) + " " +
                       std::to_string(n.bound);
            case Kind::Not: return "!(" + walk(*n.a, false) + ")";
            case Kind::And: {
                std::string s = walk(*n.a, false) + " && " + walk(*n.b, false);
                return top ? s : "(" + s + ")";
            }
            case Kind::Or: {
                std::string s = walk(*n.a, false) + " || " + walk(*n.b, false);
                return top ? s : "(" + s + ")";
            }
        }
        return "true";
    };
    return walk(*root_, true);
}

namespace {

struct Parser {
    const std::string& text;
    const ClockSet& clocks;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(const std::string& tok) {
        skip_ws();
        if (text.compare(pos, tok.size(), tok) == 0) {
            pos += tok.size();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos); }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() &&
            (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            ++pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                         text[pos] == '_'))
                ++pos;
        }
        if (start == pos) fail("expected identifier");
        return text.substr(start, pos - start);
    }

    std::int64_t integer() {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos || (pos - start == 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
            fail("expected integer");
        return std::stoll(text.substr(start, pos - start));
    }

    Rel relation() {
        skip_ws();
        if (eat("<=")) return Rel::Le;
        if (eat(">=")) return Rel::Ge;
        if (eat("<")) return Rel::Lt;
        if (eat(">")) return Rel::Gt;
        if (eat("=")) return Rel::Eq;
        fail("expected relation");
    }

    ClockConstraint primary() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of constraint");
        if (eat("(")) {
            ClockConstraint c = disjunction();
            if (!eat(")")) fail("expected ')'");
            return c;
        }
        if (eat("!")) return !primary();
        std::size_t save = pos;
        std::string name = ident();
        if (name == "true") return ClockConstraint::truth();
        if (name == "false") return ClockConstraint::falsity();
        auto x = clocks.find(name);
        if (!x) {
            pos = save;
            fail("unknown clock '" + name + "'");
        }
        skip_ws();
        if (eat("-")) {
            std::string name2 = ident();
            auto y = clocks.find(name2);
            if (!y) fail("unknown clock '" + name2 + "'");
            Rel r = relation();
            return ClockConstraint::diff_atom(*x, *y, r, integer());
        }
        Rel r = relation();
        return ClockConstraint::atom(*x, r, integer());
    }

    ClockConstraint conjunction() {
        ClockConstraint c = primary();
        while (eat("&&")) c = c && primary();
        return c;
    }

    ClockConstraint disjunction() {
        ClockConstraint c = conjunction();
        while (eat("||")) c = c || conjunction();
        return c;
    }
};

}  // namespace

ClockConstraint parse_constraint(const std::string& text, const ClockSet& clocks) {
    Parser p{text, clocks};
    ClockConstraint c = p.disjunction();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input after constraint");
    return c;
}

}  // namespace tsyn
