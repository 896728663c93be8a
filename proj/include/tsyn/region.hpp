#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsyn/clocks.hpp"
#include "tsyn/constraint.hpp"

namespace tsyn {

// Equivalence class of clock valuations that satisfy the same constraints
// with constants bounded by m, difference atoms included.
//
// Canonical encoding, per clock:
//   unary class: value > m, or (integer part in 0..m, fractional part zero?)
// and per ordered pair i < j the class of v[i] - v[j] relative to the
// integers -m..m (encoded as 2z for "= z", 2z+1 for "in (z, z+1)", clamped
// to 2m+1 / -(2m+1) beyond the tested range).
//
// Difference classes are needed for canonicity: two valuations with all
// clocks above m can still disagree on x - y <= z, and guards may test that.
//
// A sample member valuation is carried for successor/reset computation and
// witness extraction; it does not participate in equality or hashing.
class Region {
  public:
    struct Unary {
        bool above_max = false;
        std::int64_t int_part = 0;  // meaningful iff !above_max
        bool frac_zero = false;     // meaningful iff !above_max
        bool operator==(const Unary&) const = default;
        auto operator<=>(const Unary&) const = default;
    };

    Region() = default;

    int clock_count() const { return static_cast<int>(unary_.size()); }
    std::int64_t max_constant() const { return m_; }
    const ClockValuation& sample() const { return sample_; }

    const Unary& unary(ClockId c) const { return unary_.at(static_cast<std::size_t>(c)); }
    bool above_max(ClockId c) const { return unary(c).above_max; }
    // Fractional-part-is-zero flag; only defined for clocks <= m.
    bool frac_zero(ClockId c) const { return !above_max(c) && unary(c).frac_zero; }

    // frac(x) < frac(y), resp. frac(x) = frac(y), for clocks x, y <= m.
    bool frac_less(ClockId x, ClockId y) const;
    bool frac_eq(ClockId x, ClockId y) const;

    // True iff the whole class satisfies c; requires max_constant(c) <= m.
    bool satisfies(const ClockConstraint& c) const;

    // Constraint whose solution set is exactly this class.
    ClockConstraint characteristic_constraint() const;

    // All clocks strictly above m (the absorbing final class).
    bool is_unbounded() const;

    bool same_class(const Region& o) const { return m_ == o.m_ && unary_ == o.unary_ && diff_ == o.diff_; }
    std::size_t hash() const;
    // Total order on encodings; used for deterministic enumeration output.
    std::strong_ordering order(const Region& o) const;

    std::string str(const ClockSet& clocks) const;

    friend Region region_of(const ClockValuation& v, std::int64_t m);

  private:
    std::int64_t diff_class(ClockId i, ClockId j) const;  // signed, any pair

    std::int64_t m_ = 0;
    std::vector<Unary> unary_;
    std::vector<std::int64_t> diff_;  // upper triangle, row-major, i < j
    ClockValuation sample_;
};

// Canonical region containing v.
Region region_of(const ClockValuation& v, std::int64_t m);

// Smallest elapse moving v into the next region, or nullopt when every
// clock is already above m. Adding the returned delta to v lands exactly in
// the immediate successor region.
std::optional<Rational> successor_delta(const ClockValuation& v, std::int64_t m);

// Immediate time successor; the unbounded region is its own successor.
Region region_time_successor(const Region& r);

// Region of [Y -> 0]mu for any mu in r.
Region region_reset(const Region& r, ClockSubset ys);

// Complete, duplicate-free, deterministically ordered list of all regions
// over k clocks with constant bound m.
std::vector<Region> enumerate_regions(int k, std::int64_t m);

}  // namespace tsyn
