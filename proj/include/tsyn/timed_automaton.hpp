#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tsyn/clocks.hpp"
#include "tsyn/constraint.hpp"
#include "tsyn/timed_word.hpp"

namespace tsyn {

using LocationId = int;
using SymbolId = int;

enum class AcceptanceMode { Finite, Buchi, GenBuchi };

struct TimedTransition {
    LocationId from;
    std::optional<SymbolId> label;  // nullopt = epsilon
    ClockConstraint guard;
    ClockSubset resets;
    LocationId to;
};

// Nondeterministic timed automaton with epsilon transitions. Also the
// carrier for deterministic automata; determinism is a checkable property,
// not a distinct type. Immutable in practice: build once, then query.
class TimedAutomaton {
  public:
    std::vector<std::string> alphabet;
    std::vector<std::string> locations;
    ClockSet clocks;
    std::set<LocationId> initial;
    std::set<LocationId> final;                 // Finite / Buchi
    std::vector<std::set<LocationId>> gen_final;  // GenBuchi only, nonempty
    std::vector<TimedTransition> transitions;
    AcceptanceMode mode = AcceptanceMode::Finite;

    int location_count() const { return static_cast<int>(locations.size()); }
    int symbol_count() const { return static_cast<int>(alphabet.size()); }

    std::optional<SymbolId> find_symbol(const std::string& s) const;
    SymbolId require_symbol(const std::string& s) const;

    // Larger of 0 and every constant in any guard.
    std::int64_t max_constant() const;

    // Structural sanity: endpoints in range, guard clocks within the clock
    // set, generalized mode has at least one final set.
    void validate() const;

    LocationId add_location(const std::string& name);
    void add_transition(LocationId from, std::optional<SymbolId> label, ClockConstraint guard,
                        ClockSubset resets, LocationId to);
};

// --- boolean and structural operations -----------------------------------

// No epsilon labels, single initial location, and same-source same-symbol
// rules with jointly satisfiable guards share resets and target.
bool is_deterministic(const TimedAutomaton& a);

// Exact finite-word membership; epsilon transitions may fire at any
// intermediate times. Decided by product with a one-clock word automaton
// after common-denominator scaling, then region-level emptiness.
bool accepts_finite(const TimedAutomaton& a, const TimedWord& w);

// Deterministic input, m at least its max constant. Output guards are
// characteristic region constraints, one rule per (location, symbol,
// region); missing behavior routes to a fresh rejecting sink.
TimedAutomaton regionise(const TimedAutomaton& d, std::int64_t m);

// Complement of a deterministic finite-word automaton over monotone words.
TimedAutomaton complement_dta(const TimedAutomaton& d);

struct ProductOptions {
    // Rename clocks apart (default) or unify clocks by name. Shared-name
    // products require the operands to reset shared clocks consistently;
    // the monitor constructions guarantee that by design.
    bool share_clocks_by_name = false;
};

// Synchronized product: finite mode intersects languages; Buchi mode builds
// a generalized-Buchi product with one final-set group per operand.
// Epsilon transitions interleave asynchronously.
TimedAutomaton product(const TimedAutomaton& a, const TimedAutomaton& b,
                       const ProductOptions& opts = {});

// Disjoint union; operands are first degeneralized so a single final set
// suffices per side.
TimedAutomaton union_ta(const TimedAutomaton& a, const TimedAutomaton& b);

// Relabel each a-transition to all (a, b) pairs over a composite alphabet
// "a|b". Recognizes the inverse projection of the language.
TimedAutomaton inverse_projection(const TimedAutomaton& a, const std::vector<std::string>& enrich);

// L(A) . (Sigma . time)^omega: fresh accepting sink, epsilon-reachable from
// every final location, self-looping on all symbols. Output is Buchi.
TimedAutomaton suffix_omega(const TimedAutomaton& a);

// Counter construction collapsing generalized-Buchi acceptance to plain
// Buchi at the timed level. Identity for Finite/Buchi inputs.
TimedAutomaton degeneralize_ta(const TimedAutomaton& a);

// Drop clocks that appear in no guard (resets of such clocks are
// unobservable). Keeps languages intact and shrinks region spaces.
TimedAutomaton drop_unused_clocks(const TimedAutomaton& a);

// Restrict to locations reachable in the location digraph (a sound
// overapproximation of timed reachability), dropping dangling transitions.
TimedAutomaton trim_ta(const TimedAutomaton& a);

// Composite-symbol helpers for product alphabets "a|b".
std::string compose_symbol(const std::string& a, const std::string& b);
std::pair<std::string, std::string> split_symbol(const std::string& ab);

}  // namespace tsyn
