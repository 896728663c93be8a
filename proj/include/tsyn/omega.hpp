#pragma once

#include <cstdint>
#include <vector>

#include "tsyn/untimed_automaton.hpp"

namespace tsyn {

// Epsilon removal for Buchi automata. A symbol step is accepting when some
// epsilon path around it passes a final state; states are doubled with an
// entry flag so acceptance stays state-based. Runs whose suffix is
// epsilon-only are dropped (a projection would yield a finite word).
UntimedAutomaton remove_epsilon(const UntimedAutomaton& n);

// Counter construction collapsing generalized-Buchi to Buchi. Identity on
// single-set inputs.
UntimedAutomaton degeneralize(const UntimedAutomaton& g);

// Membership of stem . loop^omega. Works for Buchi and generalized-Buchi,
// with or without epsilon transitions.
bool accepts_lasso(const UntimedAutomaton& m, const LassoWord& u);

// Drop states that cannot participate in any accepting run (unreachable or
// not leading to an accepting cycle). Preserves the omega language.
UntimedAutomaton trim_omega(const UntimedAutomaton& a);

// Quotient by forward bisimulation (respecting all final sets). Preserves
// the omega language; the workhorse for shrinking region automata before
// determinization. Epsilon-free input only.
UntimedAutomaton bisim_quotient(const UntimedAutomaton& a);

}  // namespace tsyn
