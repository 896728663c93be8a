#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsyn/determinize.hpp"
#include "tsyn/parity_automaton.hpp"
#include "tsyn/untimed_automaton.hpp"

namespace tsyn {

enum class Player { I, II };

// Turn-based parity game, min-even convention. Player I wins a play iff the
// minimum priority seen infinitely often is even; Player II iff it is odd.
// Vertices alternate strictly between the two owners.
struct ParityGame {
    struct Vertex {
        Player owner;
        int priority;
        std::string action_label;  // action taken to ENTER this vertex ("" for initial)
    };
    std::vector<Vertex> vertices;
    std::vector<std::vector<int>> edges;  // successor vertex ids
    int initial = 0;

    int size() const { return static_cast<int>(vertices.size()); }
    void validate() const;  // totality
};

struct GameSolution {
    std::vector<Player> winner;              // per vertex
    std::vector<int> strategy_even;         // Player I's positional choice (vertex id or -1)
    std::vector<int> strategy_odd;          // Player II's positional choice
};

// Zielonka's recursive attractor algorithm.
GameSolution solve_parity(const ParityGame& g);

// Finite-memory reactive controller: total update (memory, input) ->
// (memory, output).
struct MealyController {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    int memory_count = 0;
    int initial = 0;
    // update[m * |inputs| + i] = (next memory, output index)
    std::vector<std::pair<int, int>> update;

    std::pair<int, int> step(int memory, int input) const {
        return update[static_cast<std::size_t>(memory) * inputs.size() +
                      static_cast<std::size_t>(input)];
    }
    void validate() const;
};

// Arena of the synthesis game for a deterministic parity condition over a
// composite alphabet "a|b": Player I picks a, Player II answers b, the
// automaton tracks the pair.
ParityGame build_synthesis_arena(const ParityAutomaton& p, const std::vector<std::string>& inputs,
                                 const std::vector<std::string>& outputs);

// Player II's winning positional strategy as a Mealy machine over the
// inputs/outputs of the arena. Fails when the initial vertex is not in
// Player II's region.
MealyController extract_mealy(const ParityGame& g, const GameSolution& sol,
                              const std::vector<std::string>& inputs,
                              const std::vector<std::string>& outputs);

// Player II tries to keep every play out of L(W); returns her controller or
// nullopt when Player I forces membership. W is a Buchi automaton over the
// composite alphabet of pairs, epsilon allowed (removed internally).
std::optional<MealyController> decide_00_synthesis(const std::vector<std::string>& inputs,
                                                   const std::vector<std::string>& outputs,
                                                   const UntimedAutomaton& w,
                                                   std::size_t cap = 200000);

// Moore-style partition refinement; language-equivalent smaller machine.
MealyController minimize_mealy(const MealyController& m);

}  // namespace tsyn
