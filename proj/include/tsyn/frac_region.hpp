#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsyn/clocks.hpp"
#include "tsyn/region.hpp"

namespace tsyn {

// Abstraction of a partial clock valuation recording only which tracked
// clocks have fractional part zero and how the nonzero fractional parts
// compare. Canonical: per tracked clock a rank, where rank -1 means
// fractional part zero and ranks 0..L-1 order the nonzero classes.
class FractionalRegion {
  public:
    FractionalRegion() = default;

    // Empty domain.
    static FractionalRegion empty() { return FractionalRegion(); }

    static FractionalRegion of(const std::map<ClockId, Rational>& partial_valuation);

    bool is_empty() const { return entries_.empty(); }
    // Tracked clocks, sorted.
    std::vector<ClockId> domain() const;
    bool tracks(ClockId c) const;
    // Tracked clocks whose fractional part is zero.
    std::vector<ClockId> ones() const;
    bool frac_zero(ClockId c) const;
    // frac(x) < frac(y); both must be tracked.
    bool frac_less(ClockId x, ClockId y) const;

    // Minimal strict successor under the order induced by agreeing regions;
    // wraps cyclically at integer boundaries. Domain must be nonempty.
    FractionalRegion immediate_successor() const;

    // Domain restricted to clocks with nonzero fractional part.
    FractionalRegion drop_ones() const;
    // Clocks of ys added to the domain with fractional part zero.
    FractionalRegion reset_extend(ClockSubset ys, int ambient_clocks) const;

    bool operator==(const FractionalRegion&) const = default;
    std::strong_ordering operator<=>(const FractionalRegion&) const = default;
    std::size_t hash() const;

    std::string str(const ClockSet& clocks) const;
    // Compact name used inside enriched-alphabet symbols; stable and unique.
    std::string token(const ClockSet& clocks) const;

  private:
    int rank_of(ClockId c) const;
    // (clock, rank), sorted by clock; ranks canonical as described above.
    std::vector<std::pair<ClockId, int>> entries_;
};

// Both agreement conditions between a fractional region and a region, with
// the above-max escape on the region side.
bool agrees(const FractionalRegion& f, const Region& r);

// Minimal r' at or after r (in the time-successor chain) agreeing with f.
std::optional<Region> xsuccessor(const Region& r, const FractionalRegion& f);

// All fractional regions over k clocks, deterministically ordered.
std::vector<FractionalRegion> enumerate_frac_regions(int k);

}  // namespace tsyn
