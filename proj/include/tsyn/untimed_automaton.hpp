#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tsyn/timed_automaton.hpp"  // AcceptanceMode, SymbolId

namespace tsyn {

using StateId = int;

struct UntimedTransition {
    StateId from;
    std::optional<SymbolId> label;  // nullopt = epsilon
    StateId to;
};

// Finite automaton over a plain alphabet; finite-word, Buchi, or
// generalized-Buchi acceptance. Used as the carrier for region automata
// and everything downstream of untiming.
class UntimedAutomaton {
  public:
    std::vector<std::string> alphabet;
    std::vector<std::string> states;  // display names
    std::set<StateId> initial;
    std::set<StateId> final;
    std::vector<std::set<StateId>> gen_final;
    std::vector<UntimedTransition> transitions;
    AcceptanceMode mode = AcceptanceMode::Finite;

    int state_count() const { return static_cast<int>(states.size()); }
    int symbol_count() const { return static_cast<int>(alphabet.size()); }

    StateId add_state(const std::string& name);
    void add_transition(StateId from, std::optional<SymbolId> label, StateId to);

    bool has_epsilon() const;
    bool is_final(StateId s) const { return final.count(s) > 0; }

    // Adjacency: per state, list of transition indices.
    std::vector<std::vector<int>> adjacency() const;

    void validate() const;
};

// Ultimately periodic test vector over an automaton's alphabet.
struct LassoWord {
    std::vector<std::string> stem;
    std::vector<std::string> loop;  // nonempty
};

}  // namespace tsyn
