#pragma once

#include <optional>
#include <vector>

#include "tsyn/region.hpp"
#include "tsyn/timed_automaton.hpp"
#include "tsyn/untimed_automaton.hpp"

namespace tsyn {

// Region-level unfolding of a timed automaton: nodes are (location, region)
// pairs, edges fire a transition from some time successor of the source
// region. Kept separate from UntimedAutomaton so emptiness witnesses can be
// instantiated back into exact timed words.
struct RegionGraph {
    struct Node {
        LocationId loc;
        Region region;
    };
    struct Edge {
        int from;
        std::optional<SymbolId> label;
        int to;
        int elapse_steps;    // successor steps from the source region to the firing region
        ClockSubset resets;  // resets of the fired transition
    };

    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<int> initial;
    AcceptanceMode mode = AcceptanceMode::Finite;
    std::vector<bool> node_final;                 // Finite / Buchi
    std::vector<std::vector<bool>> node_gen_final;  // GenBuchi

    std::vector<std::vector<int>> adjacency() const;
};

// m must dominate every guard constant of a. A cap of 0 means unlimited.
RegionGraph region_graph(const TimedAutomaton& a, std::int64_t m, std::size_t cap = 0);

// The untimed language of a, as an automaton over a's alphabet with states
// in canonical (location index, region encoding) order.
UntimedAutomaton region_automaton(const TimedAutomaton& a, std::int64_t m, std::size_t cap = 0);

struct EmptinessWitness {
    // Edge indices into the region graph. For finite mode only `stem` is
    // used; for (generalized) Buchi the loop is nonempty.
    std::vector<int> stem;
    std::vector<int> loop;
};

struct EmptinessResult {
    bool empty;
    std::optional<EmptinessWitness> witness;
    RegionGraph graph;  // the explored graph; witness indices refer to it
};

// Finite mode: is some final (location, region) reachable? Buchi modes: is
// an accepting lasso reachable whose loop consumes at least one symbol?
EmptinessResult nta_emptiness(const TimedAutomaton& a, std::size_t cap = 0);

// Exact rational timed word realizing a witness path. Epsilon edges
// contribute elapse only.
TimedWord instantiate_witness(const TimedAutomaton& a, const RegionGraph& g,
                              const std::vector<int>& stem_edges);

}  // namespace tsyn
