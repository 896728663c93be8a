#pragma once

#include <vector>

#include "tsyn/enriched.hpp"
#include "tsyn/timed_automaton.hpp"

namespace tsyn {

// Deterministic protocol monitors over the enriched pair alphabet. Each is
// total, has an absorbing "viol" location, and is Buchi with every other
// location final, so the automaton recognizes "the condition holds forever"
// and a verdict flip is just swapping the final set.
//
// Shared clock names: "req_<x>" is reset on every x-request (by every
// monitor reading it, so shared-clock products stay consistent) and "step"
// is reset on every letter.

// Player I's obligations: expiry signals exactly one unit after a
// non-cancelled request, tracking claims consistent with requests, correct
// fractional regions, zero-starting, strict monotonicity.
std::vector<TimedAutomaton> build_WI_monitors(const EnrichedAlphabet& ea);

// Player II's obligations: properness parity, improper requests only in
// response to expiry, improper request chains shorter than m.
std::vector<TimedAutomaton> build_WII_monitors(const EnrichedAlphabet& ea, std::int64_t m);

// Nondeterministic Buchi automaton accepting plays with an infinite
// improper request chain for clock x (guess the start, then demand a link
// exactly at every +1 boundary forever).
TimedAutomaton build_chain_guesser(const EnrichedAlphabet& ea, ClockId x);

}  // namespace tsyn
