#include "tsyn/region.hpp"

#include <functional>
#include <unordered_map>

namespace tsyn {

namespace {

// Class of a difference d relative to integers -m..m:
//   2z    for d = z
//   2z+1  for d in (z, z+1)
// clamped to -(2m+1) below -m and 2m+1 above m.
std::int64_t diff_class_of(const Rational& d, std::int64_t m) {
    if (d > Rational(m)) return 2 * m + 1;
    if (d < Rational(-m)) return -(2 * m + 1);
    std::int64_t f = d.floor();
    if (d == Rational(f)) return 2 * f;
    return 2 * f + 1;
}

}  // namespace

Region region_of(const ClockValuation& v, std::int64_t m) {
    if (m < 0) throw DomainError("negative max constant");
    Region r;
    r.m_ = m;
    r.sample_ = v;
    int k = v.size();
    r.unary_.resize(static_cast<std::size_t>(k));
    for (ClockId c = 0; c < k; ++c) {
        Region::Unary& u = r.unary_[static_cast<std::size_t>(c)];
        if (v[c] > Rational(m)) {
            u.above_max = true;
        } else {
            u.int_part = v[c].floor();
            u.frac_zero = v[c].frac().is_zero();
        }
    }
    r.diff_.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
    for (ClockId i = 0; i < k; ++i)
        for (ClockId j = i + 1; j < k; ++j) r.diff_.push_back(diff_class_of(v[i] - v[j], m));
    return r;
}

std::int64_t Region::diff_class(ClockId i, ClockId j) const {
    if (i == j) return 0;
    bool flip = i > j;
    if (flip) std::swap(i, j);
    int k = clock_count();
    // index of (i, j), i < j, in the row-major upper triangle
    std::size_t idx = static_cast<std::size_t>(i) * (2 * k - i - 1) / 2 + (j - i - 1);
    std::int64_t c = diff_.at(idx);
    return flip ? -c : c;
}

bool Region::frac_less(ClockId x, ClockId y) const {
    // For clocks <= m: frac(x) < frac(y) iff x - y lies strictly below
    // int_part(x) - int_part(y).
    std::int64_t base = unary(x).int_part - unary(y).int_part;
    return diff_class(x, y) < 2 * base;
}

bool Region::frac_eq(ClockId x, ClockId y) const {
    std::int64_t base = unary(x).int_part - unary(y).int_part;
    return diff_class(x, y) == 2 * base;
}

bool Region::satisfies(const ClockConstraint& c) const {
    if (c.max_constant() > m_)
        throw PreconditionError("constraint constant exceeds region max constant");
    return eval_constraint(sample_, c);
}

bool Region::is_unbounded() const {
    for (const Unary& u : unary_)
        if (!u.above_max) return false;
    return true;
}

ClockConstraint Region::characteristic_constraint() const {
    ClockConstraint out = ClockConstraint::truth();
    int k = clock_count();
    for (ClockId c = 0; c < k; ++c) {
        const Unary& u = unary(c);
        if (u.above_max) {
            out = out && ClockConstraint::atom(c, Rel::Gt, m_);
        } else if (u.frac_zero) {
            out = out && ClockConstraint::atom(c, Rel::Eq, u.int_part);
        } else {
            out = out && ClockConstraint::atom(c, Rel::Gt, u.int_part) &&
                  ClockConstraint::atom(c, Rel::Lt, u.int_part + 1);
        }
    }
    for (ClockId i = 0; i < k; ++i) {
        for (ClockId j = i + 1; j < k; ++j) {
            std::int64_t cl = diff_class(i, j);
            if (cl == 2 * m_ + 1) {
                out = out && ClockConstraint::diff_atom(i, j, Rel::Gt, m_);
            } else if (cl == -(2 * m_ + 1)) {
                out = out && ClockConstraint::diff_atom(i, j, Rel::Lt, -m_);
            } else if (cl % 2 == 0) {
                out = out && ClockConstraint::diff_atom(i, j, Rel::Eq, cl / 2);
            } else {
                std::int64_t z = (cl - 1) / 2;  // cl odd, cl - 1 even: exact
                out = out && ClockConstraint::diff_atom(i, j, Rel::Gt, z) &&
                      ClockConstraint::diff_atom(i, j, Rel::Lt, z + 1);
            }
        }
    }
    return out;
}

std::size_t Region::hash() const {
    std::size_t h = std::hash<std::int64_t>()(m_);
    auto mix = [&h](std::size_t v) { h = h * 1000003u ^ v; };
    for (const Unary& u : unary_) {
        mix(u.above_max ? 2u : (u.frac_zero ? 1u : 0u));
        mix(static_cast<std::size_t>(u.int_part));
    }
    for (std::int64_t d : diff_) mix(static_cast<std::size_t>(d + 1000));
    return h;
}

std::strong_ordering Region::order(const Region& o) const {
    if (auto c = m_ <=> o.m_; c != 0) return c;
    if (auto c = unary_ <=> o.unary_; c != 0) return c;
    return diff_ <=> o.diff_;
}

std::string Region::str(const ClockSet& clocks) const {
    return characteristic_constraint().str(clocks);
}

std::optional<Rational> successor_delta(const ClockValuation& v, std::int64_t m) {
    // Clocks still at or below m drive the next change; above-max ones are
    // settled (differences are elapse-invariant).
    Rational min_gap(-1);
    bool any_zero_frac = false;
    bool any_live = false;
    for (ClockId c = 0; c < v.size(); ++c) {
        if (v[c] > Rational(m)) continue;
        any_live = true;
        Rational f = v[c].frac();
        if (f.is_zero()) {
            any_zero_frac = true;
        } else {
            Rational gap = Rational(1) - f;
            if (min_gap.is_negative() || gap < min_gap) min_gap = gap;
        }
    }
    if (!any_live) return std::nullopt;
    if (any_zero_frac) {
        // Open up the zero fractions without letting any other clock reach
        // an integer.
        return min_gap.is_negative() ? Rational(1, 2) : min_gap / Rational(2);
    }
    return min_gap;  // exactly the clocks with maximal fraction expire
}

Region region_time_successor(const Region& r) {
    auto delta = successor_delta(r.sample(), r.max_constant());
    if (!delta) return r;  // absorbing final region
    return region_of(r.sample().plus(*delta), r.max_constant());
}

Region region_reset(const Region& r, ClockSubset ys) {
    return region_of(r.sample().reset(ys), r.max_constant());
}

std::vector<Region> enumerate_regions(int k, std::int64_t m) {
    if (k < 0) throw DomainError("negative clock count");
    if (m < 0) throw DomainError("negative max constant");
    if (k == 0) return {region_of(ClockValuation(0), m)};

    // Every class has a member on this grid: integer parts up to
    // 2m+2 + (k-1)(m+2) realize all clamped pairwise difference patterns,
    // and k+1 equally spaced fractions realize all orderings with ties.
    std::int64_t max_int = 2 * m + 2 + static_cast<std::int64_t>(k - 1) * (m + 2);
    std::vector<Rational> fracs;
    for (int i = 0; i <= k; ++i) fracs.emplace_back(i, k + 1);

    std::vector<Region> out;
    std::unordered_map<std::size_t, std::vector<std::size_t>> by_hash;

    std::vector<Rational> vals(static_cast<std::size_t>(k), Rational(0));
    std::function<void(int)> rec = [&](int c) {
        if (c == k) {
            Region r = region_of(ClockValuation(vals), m);
            auto& bucket = by_hash[r.hash()];
            for (std::size_t idx : bucket)
                if (out[idx].same_class(r)) return;
            bucket.push_back(out.size());
            out.push_back(std::move(r));
            return;
        }
        for (std::int64_t ip = 0; ip <= max_int; ++ip) {
            for (const Rational& f : fracs) {
                vals[static_cast<std::size_t>(c)] = Rational(ip) + f;
                rec(c + 1);
            }
        }
    };
    rec(0);

    std::sort(out.begin(), out.end(),
              [](const Region& a, const Region& b) { return a.order(b) < 0; });
    return out;
}

}  // namespace tsyn
