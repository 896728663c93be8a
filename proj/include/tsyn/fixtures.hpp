#pragma once

#include "tsyn/synthesis.hpp"
#include "tsyn/timed_automaton.hpp"

namespace tsyn {

// Unary-alphabet language of words with two letters exactly one unit apart,
// the later one last: guess the earlier letter, reset, accept at one.
TimedAutomaton fixture_example_L();

// Its complement, recognized with two clocks by guessing which of the three
// failure modes applies (short word, total span below one, or a straddling
// adjacent pair).
TimedAutomaton fixture_example_L_complement();

// Strictly monotonic words whose letter exactly 2^k positions before the
// end is one unit before it; a binary counter in clock pairs counts the
// suffix length, 2k+2 clocks in total.
TimedAutomaton fixture_example_Lk(int k);

// Point languages: exactly one letter, at time 1 resp. time 2.
TimedAutomaton fixture_point_a();
TimedAutomaton fixture_point_b();

// Deadline game: Player II must answer bad before time 1 and ok afterwards.
GameSpec fixture_deadline_game();

}  // namespace tsyn
