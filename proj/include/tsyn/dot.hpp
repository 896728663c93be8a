#pragma once

#include <string>

#include "tsyn/synthesis.hpp"
#include "tsyn/timed_automaton.hpp"
#include "tsyn/untimed_automaton.hpp"

namespace tsyn {

// Deterministic DOT text: stable node order, guards in the constraint
// concrete syntax.
std::string to_dot(const TimedAutomaton& a);
std::string to_dot(const UntimedAutomaton& a);
std::string to_dot(const KMController& m);

}  // namespace tsyn
