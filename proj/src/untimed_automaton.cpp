#include "tsyn/untimed_automaton.hpp"

#include "tsyn/errors.hpp"

namespace tsyn {

StateId UntimedAutomaton::add_state(const std::string& name) {
    states.push_back(name);
    return static_cast<StateId>(states.size() - 1);
}

void UntimedAutomaton::add_transition(StateId from, std::optional<SymbolId> label, StateId to) {
    transitions.push_back({from, label, to});
}

bool UntimedAutomaton::has_epsilon() const {
    for (const auto& t : transitions)
        if (!t.label) return true;
    return false;
}

std::vector<std::vector<int>> UntimedAutomaton::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(state_count()));
    for (int i = 0; i < static_cast<int>(transitions.size()); ++i)
        adj[static_cast<std::size_t>(transitions[static_cast<std::size_t>(i)].from)].push_back(i);
    return adj;
}

void UntimedAutomaton::validate() const {
    int n = state_count();
    auto check = [&](StateId s) {
        if (s < 0 || s >= n) throw DomainError("state outside state set");
    };
    for (StateId s : initial) check(s);
    for (StateId s : final) check(s);
    for (const auto& fs : gen_final)
        for (StateId s : fs) check(s);
    for (const auto& t : transitions) {
        check(t.from);
        check(t.to);
        if (t.label && (*t.label < 0 || *t.label >= symbol_count()))
            throw DomainError("transition label outside alphabet");
    }
    if (mode == AcceptanceMode::GenBuchi && gen_final.empty())
        throw DomainError("generalized acceptance requires at least one final set");
}

}  // namespace tsyn
