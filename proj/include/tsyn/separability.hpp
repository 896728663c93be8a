#pragma once

#include <optional>

#include "tsyn/synthesis.hpp"
#include "tsyn/timed_automaton.hpp"

namespace tsyn {

// Outcome of the two exactness checks on a candidate separator; when one
// fails, `counterexample` is a concrete timed word on the wrong side.
struct SeparatorReport {
    bool inclusion_ok = false;
    bool disjointness_ok = false;
    std::optional<TimedWord> counterexample;
    bool ok() const { return inclusion_ok && disjointness_ok; }
};

struct SeparatorResult {
    bool separable = false;
    std::optional<TimedAutomaton> separator;
    std::int64_t m = 0;  // constant bound used (derived in k-mode)
    std::optional<SeparatorReport> report;
};

// Winning condition of the separability game: Player I builds a timed word
// and wins if a prefix lands in L(A) while answered "rej", or in L(B) while
// answered "acc". Buchi over the composite alphabet Sigma x {acc, rej}.
TimedAutomaton build_W0(const TimedAutomaton& a, const TimedAutomaton& b);

// Deterministic separator extracted from a winning controller: memory
// crossed with the last verdict; accepting iff the last verdict was acc.
TimedAutomaton controller_to_separator(const KMController& m, const TimedAutomaton& a);

// The reverse direction: a deterministic separator induces a controller
// answering acc exactly on accepting continuations.
KMController separator_to_controller(const TimedAutomaton& s);

// Exact check that L(A) is contained in L(S) and L(S) misses L(B), via two
// region-level emptiness queries; failures carry instantiated witnesses.
SeparatorReport verify_separator(const TimedAutomaton& s, const TimedAutomaton& a,
                                 const TimedAutomaton& b);

SeparatorResult decide_km_separability(const TimedAutomaton& a, const TimedAutomaton& b, int k,
                                       std::int64_t m, const SynthesisOptions& opts = {});

SeparatorResult decide_k_separability(const TimedAutomaton& a, const TimedAutomaton& b, int k,
                                      const SynthesisOptions& opts = {});

}  // namespace tsyn
