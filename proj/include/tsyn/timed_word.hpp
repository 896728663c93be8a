#pragma once

#include <string>
#include <vector>

#include "tsyn/rational.hpp"

namespace tsyn {

struct TimedLetter {
    std::string symbol;
    Rational time;
    bool operator==(const TimedLetter&) const = default;
};

// Finite timed word: timestamps weakly increasing from 0.
class TimedWord {
  public:
    TimedWord() = default;
    explicit TimedWord(std::vector<TimedLetter> letters);

    const std::vector<TimedLetter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    bool strictly_monotonic() const { return strict_; }

    std::vector<std::string> untime() const;
    std::string str() const;

    bool operator==(const TimedWord&) const = default;

  private:
    std::vector<TimedLetter> letters_;
    bool strict_ = true;
};

// Word literal syntax: (a,0)(a,2/5)(b,1.25) — rationals p/q or decimals,
// both converted exactly.
TimedWord parse_timed_word(const std::string& text);

}  // namespace tsyn
