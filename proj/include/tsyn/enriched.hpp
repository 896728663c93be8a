#pragma once

#include <string>
#include <vector>

#include "tsyn/frac_region.hpp"
#include "tsyn/timed_automaton.hpp"

namespace tsyn {

// Action alphabets of the protocol game. Player I letters pair a base
// letter (or a tick) with a fractional region over the controller clocks;
// Player II letters pair a base letter (or a tick) with a request set.
class EnrichedAlphabet {
  public:
    EnrichedAlphabet(std::vector<std::string> base_a, std::vector<std::string> base_b, int k);

    struct ALetter {
        int base;  // index into base_a, or -1 for tick
        int freg;  // index into fregs
    };
    struct BLetter {
        int base;  // index into base_b, or -1 for tick
        ClockSubset requests;
    };

    const ClockSet& clocks() const { return clocks_; }
    int clock_count() const { return clocks_.size(); }
    const std::vector<std::string>& base_a() const { return base_a_; }
    const std::vector<std::string>& base_b() const { return base_b_; }
    const std::vector<FractionalRegion>& fregs() const { return fregs_; }

    const std::vector<ALetter>& a_letters() const { return a_letters_; }
    const std::vector<BLetter>& b_letters() const { return b_letters_; }
    const std::vector<std::string>& a_tokens() const { return a_tokens_; }
    const std::vector<std::string>& b_tokens() const { return b_tokens_; }

    // Composite "aToken|bToken" symbols, a-major order, and decoding of a
    // pair symbol index back into the two letters.
    const std::vector<std::string>& pair_symbols() const { return pair_symbols_; }
    ALetter a_of_pair(int pair_index) const { return a_letters_[static_cast<std::size_t>(pair_index) / b_letters_.size()]; }
    BLetter b_of_pair(int pair_index) const { return b_letters_[static_cast<std::size_t>(pair_index) % b_letters_.size()]; }

    int a_token_index(int base, const FractionalRegion& f) const;
    int freg_index(const FractionalRegion& f) const;

    bool a_is_tick(const ALetter& l) const { return l.base < 0; }
    bool b_is_tick(const BLetter& l) const { return l.base < 0; }

  private:
    ClockSet clocks_;
    std::vector<std::string> base_a_;
    std::vector<std::string> base_b_;
    std::vector<FractionalRegion> fregs_;
    std::vector<ALetter> a_letters_;
    std::vector<BLetter> b_letters_;
    std::vector<std::string> a_tokens_;
    std::vector<std::string> b_tokens_;
    std::vector<std::string> pair_symbols_;
};

}  // namespace tsyn
