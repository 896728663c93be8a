#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsyn/enriched.hpp"
#include "tsyn/parity_game.hpp"
#include "tsyn/region_automaton.hpp"
#include "tsyn/timed_automaton.hpp"

namespace tsyn {

// Timed synthesis instance: Player I picks letters from `player1` with
// timestamps, Player II answers from `player2`; Player I wins a play iff it
// lands in the condition language (Buchi, over composite "a|b" symbols).
struct GameSpec {
    std::vector<std::string> player1;
    std::vector<std::string> player2;
    TimedAutomaton condition;
    bool zero_starting = false;
    bool strictly_monotonic = false;

    void validate() const;
};

// Regionised timed Mealy controller with k clocks and constants <= m.
class KMController {
  public:
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    ClockSet clocks;
    std::int64_t max_constant = 0;
    int memory_count = 0;
    int initial = 0;
    std::vector<Region> regions;  // enumerate_regions(k, m), canonical order

    struct Rule {
        int next;
        int output;
        ClockSubset resets;
    };
    // update[(mem * |inputs| + input) * |regions| + region]
    std::vector<Rule> update;

    int clock_count() const { return clocks.size(); }
    const Rule& rule(int mem, int input, int region) const {
        return update[(static_cast<std::size_t>(mem) * inputs.size() +
                       static_cast<std::size_t>(input)) *
                          regions.size() +
                      static_cast<std::size_t>(region)];
    }
    int region_index(const Region& r) const;
    void validate() const;
};

// One conform run: initial (memory, valuation), then per move the letter,
// the timestamp, and the controller's state after it.
struct ConformRun {
    struct Step {
        std::string input;
        std::string output;
        Rational time;
        int memory;
        ClockValuation valuation;
    };
    int initial_memory = 0;
    ClockValuation initial_valuation;
    std::vector<Step> steps;
};

// --- preprocessing transforms ---------------------------------------------

// Forces plays to begin with a fresh Player I letter at time 0. The fresh
// letter is appended to player1 (renamed if it collides).
GameSpec zero_starting_transform(const GameSpec& g);

// Player I letters gain a repeat flag; flagged-0 letters collapse onto the
// previous timestamp before the original condition is consulted, and
// non-strict plays are excluded. Exact for letter transitions (guessed
// anchor resets) and for bare epsilon transitions; epsilon transitions with
// guards or resets are rejected.
GameSpec strict_monotonic_transform(const GameSpec& g);

// Pipeline-internal variant: the strictness conjunct may be omitted when a
// later intersection enforces it anyway, saving one clock.
GameSpec strict_monotonic_transform_impl(const GameSpec& g, bool include_strict_guard);

// The collapse recurrence on timestamps: flagged-0 letters inherit the
// previous timestamp. flags[i] and times[i] describe letter i.
std::vector<Rational> collapse_timestamps(const std::vector<Rational>& times,
                                          const std::vector<bool>& flags);

// Controller halves of the transform correspondences: a controller for the
// transformed game becomes one for the original game.
KMController undo_strict_monotonic(const KMController& k2);
KMController undo_zero_starting(const KMController& k1, const std::string& start_symbol);

// --- protocol winning conditions ------------------------------------------

// Winning condition of the enriched game at clock budget k and constant
// bound m: Player I obligations intersected with (the tick-lifted original
// condition or a Player II protocol violation).
TimedAutomaton build_Wprime(const GameSpec& g, int k, std::int64_t m);

// Variant whose Player II escape is an infinite improper request chain;
// independent of m.
TimedAutomaton build_Wdoubleprime(const GameSpec& g, int k);

// --- controller constructions ---------------------------------------------

// Untimed controller for the enriched game, extended with tracked region
// and fractional-region memory. The machine runs over enriched tokens; the
// annotations expose the tracked data per memory state.
struct CompleteController {
    MealyController machine;
    std::vector<int> mem_base;  // memory of the underlying machine
    std::vector<Region> mem_region;
    std::vector<FractionalRegion> mem_freg;
};

CompleteController complete_controller(const MealyController& m_enriched,
                                       const EnrichedAlphabet& ea, std::int64_t m);

// Timed controller obtained by replaying the complete controller through
// the protocol: on input region r-hat, improper rounds are simulated at
// each fractional boundary until the stored data agrees.
KMController lift_controller(const CompleteController& mc, const EnrichedAlphabet& ea,
                             std::int64_t m);

// The conform-run recurrence: the region of (valuation + elapse) selects
// the rule, resets apply afterwards.
ConformRun simulate_controller(const KMController& m, const std::vector<TimedLetter>& moves);

// Reachable-part restriction and bisimulation-style minimization over the
// (input, region) -> (output, resets) behavior; conform runs are preserved
// exactly.
KMController minimize_controller(const KMController& m);

// Closed-loop model check: the controller composed with the condition
// admits no accepting lasso under any Player I moves. On failure,
// `counterexample` holds a concrete Player I move sequence (the lasso's
// stem plus a few unrollings of its loop).
struct ControllerVerdict {
    bool winning;
    std::optional<TimedWord> counterexample;
};
ControllerVerdict verify_controller(const KMController& m, const GameSpec& g,
                                    std::size_t cap = 0);

// --- decision procedures ----------------------------------------------------

struct SynthesisOptions {
    std::size_t determinization_cap = 200000;
    std::size_t region_cap = 2000000;
    bool verify = true;
};

// Is there a winning k,m-controller for Player II? k = 0 bypasses the
// protocol and solves the untimed game directly.
std::optional<KMController> solve_km(const GameSpec& g, int k, std::int64_t m,
                                     const SynthesisOptions& opts = {});

struct KSolution {
    std::int64_t m;
    KMController controller;
    int untimed_memory;    // |L| of the solved untimed controller
    int enriched_inputs;   // |A'| used for the bound
};

// Is there a winning k-controller for some m? On success the returned bound
// is |A'| * |L| + 1 for the solved untimed controller.
std::optional<KSolution> solve_k(const GameSpec& g, int k, const SynthesisOptions& opts = {});

}  // namespace tsyn
