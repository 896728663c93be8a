#pragma once

#include <string>

#include "tsyn/separability.hpp"
#include "tsyn/synthesis.hpp"
#include "tsyn/timed_automaton.hpp"

namespace tsyn::json_io {

// Canonical JSON documents; parse(serialize(x)) is the identity and
// serialize(parse(s)) is byte-stable.
std::string serialize_automaton(const TimedAutomaton& a);
TimedAutomaton parse_automaton(const std::string& text);

std::string serialize_game(const GameSpec& g);
GameSpec parse_game(const std::string& text);

std::string serialize_controller(const KMController& m);
KMController parse_controller(const std::string& text);

std::string serialize_report(const SeparatorReport& r);

std::string serialize_run(const ConformRun& run);

}  // namespace tsyn::json_io
