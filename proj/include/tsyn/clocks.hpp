#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsyn/errors.hpp"
#include "tsyn/rational.hpp"

namespace tsyn {

// Index of a clock inside one clock set; indices are dense 0..k-1.
using ClockId = int;

// An ordered set of named clocks. The index of a name is its ClockId.
class ClockSet {
  public:
    ClockSet() = default;
    explicit ClockSet(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j]) throw DomainError("duplicate clock name: " + names_[i]);
    }

    int size() const { return static_cast<int>(names_.size()); }
    bool empty() const { return names_.empty(); }
    const std::string& name(ClockId c) const { return names_.at(static_cast<std::size_t>(c)); }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<ClockId> find(const std::string& name) const {
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) return std::nullopt;
        return static_cast<ClockId>(it - names_.begin());
    }

    ClockId require(const std::string& name) const {
        auto c = find(name);
        if (!c) throw DomainError("unknown clock: " + name);
        return *c;
    }

    // A name not present in this set, derived from `base`.
    std::string fresh_name(const std::string& base) const {
        std::string n = base;
        while (find(n)) n += "_";
        return n;
    }

    bool operator==(const ClockSet&) const = default;

  private:
    std::vector<std::string> names_;
};

// Subset of a clock set, as a bitmask over indices. Fine for desk-scale k.
class ClockSubset {
  public:
    ClockSubset() : bits_(0) {}
    static ClockSubset none() { return ClockSubset(); }
    static ClockSubset all(int k) { return ClockSubset((k >= 64 ? 0 : (std::uint64_t{1} << k)) - 1); }
    static ClockSubset single(ClockId c) { return ClockSubset(std::uint64_t{1} << c); }

    bool contains(ClockId c) const { return (bits_ >> c) & 1; }
    ClockSubset with(ClockId c) const { return ClockSubset(bits_ | (std::uint64_t{1} << c)); }
    ClockSubset without(ClockId c) const { return ClockSubset(bits_ & ~(std::uint64_t{1} << c)); }
    ClockSubset union_with(ClockSubset o) const { return ClockSubset(bits_ | o.bits_); }
    ClockSubset intersect(ClockSubset o) const { return ClockSubset(bits_ & o.bits_); }
    bool subset_of(ClockSubset o) const { return (bits_ & ~o.bits_) == 0; }
    bool empty() const { return bits_ == 0; }
    int count() const { return __builtin_popcountll(bits_); }
    std::uint64_t raw() const { return bits_; }

    std::vector<ClockId> members(int k) const {
        std::vector<ClockId> out;
        for (ClockId c = 0; c < k; ++c)
            if (contains(c)) out.push_back(c);
        return out;
    }

    bool operator==(const ClockSubset&) const = default;

  private:
    explicit ClockSubset(std::uint64_t b) : bits_(b) {}
    std::uint64_t bits_;
};

// Assignment of a nonnegative rational to every clock of the ambient set.
class ClockValuation {
  public:
    ClockValuation() = default;
    explicit ClockValuation(int k) : vals_(static_cast<std::size_t>(k), Rational(0)) {}
    explicit ClockValuation(std::vector<Rational> vals) : vals_(std::move(vals)) {
        for (const auto& v : vals_)
            if (v.is_negative()) throw DomainError("negative clock value");
    }

    int size() const { return static_cast<int>(vals_.size()); }
    const Rational& operator[](ClockId c) const { return vals_.at(static_cast<std::size_t>(c)); }

    ClockValuation plus(const Rational& delta) const {
        if (delta.is_negative()) throw DomainError("negative time elapse");
        std::vector<Rational> out;
        out.reserve(vals_.size());
        for (const auto& v : vals_) out.push_back(v + delta);
        return ClockValuation(std::move(out));
    }

    ClockValuation reset(ClockSubset ys) const {
        std::vector<Rational> out;
        out.reserve(vals_.size());
        for (std::size_t i = 0; i < vals_.size(); ++i)
            out.push_back(ys.contains(static_cast<ClockId>(i)) ? Rational(0) : vals_[i]);
        return ClockValuation(std::move(out));
    }

    bool operator==(const ClockValuation&) const = default;

  private:
    std::vector<Rational> vals_;
};

}  // namespace tsyn
