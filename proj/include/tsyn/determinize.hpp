#pragma once

#include "tsyn/parity_automaton.hpp"
#include "tsyn/untimed_automaton.hpp"

namespace tsyn {

// Safra-style determinization of an epsilon-free Buchi automaton into a
// deterministic parity automaton (min-even). The construction tracks a tree
// of state sets: children split off the runs that just visited a final
// state, a node turns "green" when its children jointly cover it (every run
// it follows saw a final since the last green), and nodes keep compact
// names whose order is stable under insertions and deletions. Each step
// emits 2e+1 for the smallest deleted name e, 2f+2 for the smallest green
// name f, whichever is smaller; priorities are then moved onto states.
//
// Throws ResourceError("determinize", cap) when the output would exceed
// `cap` states. A cap of 0 means unlimited.
ParityAutomaton determinize(const UntimedAutomaton& nba, std::size_t cap = 200000);

}  // namespace tsyn
