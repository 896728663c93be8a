#include "tsyn/frac_region.hpp"

#include <algorithm>
#include <functional>

namespace tsyn {

FractionalRegion FractionalRegion::of(const std::map<ClockId, Rational>& pv) {
    FractionalRegion out;
    std::vector<Rational> nonzero;
    for (const auto& [c, val] : pv) {
        if (val.is_negative()) throw DomainError("negative clock value");
        Rational f = val.frac();
        if (!f.is_zero()) nonzero.push_back(f);
    }
    std::sort(nonzero.begin(), nonzero.end());
    nonzero.erase(std::unique(nonzero.begin(), nonzero.end()), nonzero.end());
    for (const auto& [c, val] : pv) {
        Rational f = val.frac();
        int rank = -1;
        if (!f.is_zero())
            rank = static_cast<int>(std::lower_bound(nonzero.begin(), nonzero.end(), f) -
                                    nonzero.begin());
        out.entries_.emplace_back(c, rank);
    }
    return out;
}

std::vector<ClockId> FractionalRegion::domain() const {
    std::vector<ClockId> out;
    out.reserve(entries_.size());
    for (const auto& [c, _] : entries_) out.push_back(c);
    return out;
}

bool FractionalRegion::tracks(ClockId c) const { return rank_of(c) != -2; }

int FractionalRegion::rank_of(ClockId c) const {
    for (const auto& [cc, r] : entries_)
        if (cc == c) return r;
    return -2;
}

std::vector<ClockId> FractionalRegion::ones() const {
    std::vector<ClockId> out;
    for (const auto& [c, r] : entries_)
        if (r == -1) out.push_back(c);
    return out;
}

bool FractionalRegion::frac_zero(ClockId c) const {
    int r = rank_of(c);
    if (r == -2) throw DomainError("clock not tracked by fractional region");
    return r == -1;
}

bool FractionalRegion::frac_less(ClockId x, ClockId y) const {
    int rx = rank_of(x), ry = rank_of(y);
    if (rx == -2 || ry == -2) throw DomainError("clock not tracked by fractional region");
    return rx < ry;
}

FractionalRegion FractionalRegion::immediate_successor() const {
    if (entries_.empty()) throw DomainError("immediate successor of empty fractional region");
    FractionalRegion out = *this;
    bool any_zero = false;
    int max_rank = -1;
    for (const auto& [c, r] : entries_) {
        if (r == -1) any_zero = true;
        max_rank = std::max(max_rank, r);
    }
    if (any_zero) {
        // Zero fractions open up and become the new minimal nonzero class.
        for (auto& [c, r] : out.entries_) r += 1;
    } else {
        // The maximal class reaches the integer boundary and wraps to zero.
        for (auto& [c, r] : out.entries_) r = (r == max_rank) ? -1 : r;
    }
    return out;
}

FractionalRegion FractionalRegion::drop_ones() const {
    FractionalRegion out;
    for (const auto& [c, r] : entries_)
        if (r != -1) out.entries_.emplace_back(c, r);
    // ranks stay dense: removing only -1 entries keeps 0..L-1 intact
    return out;
}

FractionalRegion FractionalRegion::reset_extend(ClockSubset ys, int ambient_clocks) const {
    FractionalRegion out;
    for (const auto& [c, r] : entries_) out.entries_.emplace_back(c, ys.contains(c) ? -1 : r);
    for (ClockId c = 0; c < ambient_clocks; ++c) {
        if (ys.contains(c) && rank_of(c) == -2) out.entries_.emplace_back(c, -1);
    }
    std::sort(out.entries_.begin(), out.entries_.end());
    // renormalize nonzero ranks to 0..L-1 (resets may have removed classes)
    std::vector<int> used;
    for (const auto& [c, r] : out.entries_)
        if (r >= 0) used.push_back(r);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    for (auto& [c, r] : out.entries_)
        if (r >= 0)
            r = static_cast<int>(std::lower_bound(used.begin(), used.end(), r) - used.begin());
    return out;
}

std::size_t FractionalRegion::hash() const {
    std::size_t h = 17;
    for (const auto& [c, r] : entries_)
        h = h * 1000003u ^ (static_cast<std::size_t>(c) * 31u + static_cast<std::size_t>(r + 2));
    return h;
}

std::string FractionalRegion::str(const ClockSet& clocks) const {
    if (entries_.empty()) return "{}";
    // group by rank, ascending; -1 first
    std::string out = "{";
    std::vector<std::pair<int, ClockId>> by_rank;
    for (const auto& [c, r] : entries_) by_rank.emplace_back(r, c);
    std::sort(by_rank.begin(), by_rank.end());
    int prev_rank = -3;
    bool first = true;
    for (const auto& [r, c] : by_rank) {
        if (!first) out += (r == prev_rank) ? "=" : "<";
        out += clocks.name(c);
        if (r == -1) out += "0";
        first = false;
        prev_rank = r;
    }
    out += "}";
    return out;
}

std::string FractionalRegion::token(const ClockSet& clocks) const {
    if (entries_.empty()) return "f0";
    std::string out = "f";
    for (const auto& [c, r] : entries_) {
        out += "_" + clocks.name(c) + (r == -1 ? "z" : std::to_string(r));
    }
    return out;
}

bool agrees(const FractionalRegion& f, const Region& r) {
    std::vector<ClockId> dom = f.domain();
    for (ClockId x : dom) {
        if (x >= r.clock_count()) throw DomainError("fractional region clock outside region");
        bool lhs = f.frac_zero(x);
        bool rhs = r.above_max(x) || r.frac_zero(x);
        if (lhs != rhs) return false;
        for (ClockId y : dom) {
            if (x == y) continue;
            bool l = f.frac_less(x, y);
            bool rr = r.above_max(x) || r.above_max(y) || r.frac_less(x, y);
            if (l != rr) return false;
        }
    }
    return true;
}

std::optional<Region> xsuccessor(const Region& r, const FractionalRegion& f) {
    Region cur = r;
    while (true) {
        if (agrees(f, cur)) return cur;
        Region next = region_time_successor(cur);
        if (next.same_class(cur)) return std::nullopt;  // reached the final region
        cur = next;
    }
}

std::vector<FractionalRegion> enumerate_frac_regions(int k) {
    std::vector<FractionalRegion> out;
    // choose domain; then ranks: each domain clock gets -1 or a class index;
    // class indices must form a dense prefix 0..L-1 with every class nonempty
    std::vector<ClockId> clocks_all;
    for (ClockId c = 0; c < k; ++c) clocks_all.push_back(c);
    for (std::uint64_t dom_mask = 0; dom_mask < (std::uint64_t{1} << k); ++dom_mask) {
        std::vector<ClockId> dom;
        for (ClockId c = 0; c < k; ++c)
            if ((dom_mask >> c) & 1) dom.push_back(c);
        int n = static_cast<int>(dom.size());
        // assign ranks in {-1, 0, .., n-1} to dom members, collect valid ones
        std::vector<int> ranks(static_cast<std::size_t>(n), -1);
        std::function<void(int)> rec = [&](int i) {
            if (i == n) {
                std::vector<int> used;
                for (int v : ranks)
                    if (v >= 0) used.push_back(v);
                std::sort(used.begin(), used.end());
                used.erase(std::unique(used.begin(), used.end()), used.end());
                for (std::size_t j = 0; j < used.size(); ++j)
                    if (used[j] != static_cast<int>(j)) return;  // not dense
                // build via a concrete valuation to reuse canonicalization
                std::map<ClockId, Rational> pv;
                for (int j = 0; j < n; ++j) {
                    int rk = ranks[static_cast<std::size_t>(j)];
                    pv[dom[static_cast<std::size_t>(j)]] =
                        rk == -1 ? Rational(0) : Rational(rk + 1, n + 1);
                }
                out.push_back(FractionalRegion::of(pv));
                return;
            }
            for (int v = -1; v < n; ++v) {
                ranks[static_cast<std::size_t>(i)] = v;
                rec(i + 1);
            }
        };
        rec(0);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace tsyn
