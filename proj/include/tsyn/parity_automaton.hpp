#pragma once

#include <string>
#include <vector>

#include "tsyn/untimed_automaton.hpp"

namespace tsyn {

// Deterministic parity automaton, min-even convention: a run is accepting
// iff the minimum priority seen infinitely often is even.
class ParityAutomaton {
  public:
    std::vector<std::string> alphabet;
    std::vector<std::string> states;
    StateId initial = 0;
    // delta[state * |alphabet| + symbol] -> state; total
    std::vector<StateId> delta;
    std::vector<int> priority;

    int state_count() const { return static_cast<int>(states.size()); }
    int symbol_count() const { return static_cast<int>(alphabet.size()); }
    StateId next(StateId s, SymbolId a) const {
        return delta[static_cast<std::size_t>(s) * static_cast<std::size_t>(symbol_count()) +
                     static_cast<std::size_t>(a)];
    }

    void validate() const;
};

// Membership of stem . loop^omega: unroll the loop until the state repeats
// at the same loop offset, then check the minimum priority on the cycle.
bool accepts_lasso(const ParityAutomaton& p, const LassoWord& u);

// Pointwise priority shift by +1, complementing the recognized language.
ParityAutomaton complement_parity(const ParityAutomaton& p);

}  // namespace tsyn
