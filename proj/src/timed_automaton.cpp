#include "tsyn/timed_automaton.hpp"

#include <algorithm>

#include "tsyn/errors.hpp"
#include "tsyn/region.hpp"

namespace tsyn {

std::optional<SymbolId> TimedAutomaton::find_symbol(const std::string& s) const {
    auto it = std::find(alphabet.begin(), alphabet.end(), s);
    if (it == alphabet.end()) return std::nullopt;
    return static_cast<SymbolId>(it - alphabet.begin());
}

SymbolId TimedAutomaton::require_symbol(const std::string& s) const {
    auto id = find_symbol(s);
    if (!id) throw DomainError("symbol outside alphabet: " + s);
    return *id;
}

std::int64_t TimedAutomaton::max_constant() const {
    std::int64_t m = 0;
    for (const auto& t : transitions) m = std::max(m, t.guard.max_constant());
    return m;
}

void TimedAutomaton::validate() const {
    int n = location_count();
    auto check_loc = [&](LocationId l) {
        if (l < 0 || l >= n) throw DomainError("transition endpoint outside location set");
    };
    for (LocationId l : initial) check_loc(l);
    for (LocationId l : final) check_loc(l);
    for (const auto& fs : gen_final)
        for (LocationId l : fs) check_loc(l);
    for (const auto& t : transitions) {
        check_loc(t.from);
        check_loc(t.to);
        if (t.label && (*t.label < 0 || *t.label >= symbol_count()))
            throw DomainError("transition label outside alphabet");
        if (t.guard.max_clock() >= clocks.size())
            throw DomainError("guard mentions clock outside the clock set");
    }
    if (mode == AcceptanceMode::GenBuchi && gen_final.empty())
        throw DomainError("generalized acceptance requires at least one final set");
}

LocationId TimedAutomaton::add_location(const std::string& name) {
    locations.push_back(name);
    return static_cast<LocationId>(locations.size() - 1);
}

void TimedAutomaton::add_transition(LocationId from, std::optional<SymbolId> label,
                                    ClockConstraint guard, ClockSubset resets, LocationId to) {
    transitions.push_back({from, label, std::move(guard), resets, to});
}

TimedAutomaton trim_ta(const TimedAutomaton& a) {
    std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(a.location_count()));
    for (int i = 0; i < static_cast<int>(a.transitions.size()); ++i)
        out_edges[static_cast<std::size_t>(a.transitions[static_cast<std::size_t>(i)].from)]
            .push_back(i);
    std::vector<bool> reach(static_cast<std::size_t>(a.location_count()), false);
    std::vector<LocationId> work(a.initial.begin(), a.initial.end());
    for (LocationId l : work) reach[static_cast<std::size_t>(l)] = true;
    while (!work.empty()) {
        LocationId l = work.back();
        work.pop_back();
        for (int ti : out_edges[static_cast<std::size_t>(l)]) {
            LocationId to = a.transitions[static_cast<std::size_t>(ti)].to;
            if (!reach[static_cast<std::size_t>(to)]) {
                reach[static_cast<std::size_t>(to)] = true;
                work.push_back(to);
            }
        }
    }
    TimedAutomaton out;
    out.alphabet = a.alphabet;
    out.clocks = a.clocks;
    out.mode = a.mode;
    std::vector<LocationId> remap(static_cast<std::size_t>(a.location_count()), -1);
    for (LocationId l = 0; l < a.location_count(); ++l)
        if (reach[static_cast<std::size_t>(l)])
            remap[static_cast<std::size_t>(l)] = out.add_location(a.locations[static_cast<std::size_t>(l)]);
    for (LocationId l : a.initial) out.initial.insert(remap[static_cast<std::size_t>(l)]);
    for (LocationId l : a.final)
        if (remap[static_cast<std::size_t>(l)] != -1) out.final.insert(remap[static_cast<std::size_t>(l)]);
    out.gen_final.resize(a.gen_final.size());
    for (std::size_t s = 0; s < a.gen_final.size(); ++s)
        for (LocationId l : a.gen_final[s])
            if (remap[static_cast<std::size_t>(l)] != -1)
                out.gen_final[s].insert(remap[static_cast<std::size_t>(l)]);
    if (out.mode == AcceptanceMode::GenBuchi && out.gen_final.empty()) out.gen_final.push_back({});
    for (const auto& t : a.transitions) {
        if (remap[static_cast<std::size_t>(t.from)] == -1 || remap[static_cast<std::size_t>(t.to)] == -1)
            continue;
        out.add_transition(remap[static_cast<std::size_t>(t.from)], t.label, t.guard, t.resets,
                           remap[static_cast<std::size_t>(t.to)]);
    }
    return out;
}

std::string compose_symbol(const std::string& a, const std::string& b) { return a + "|" + b; }

std::pair<std::string, std::string> split_symbol(const std::string& ab) {
    auto pos = ab.find('|');
    if (pos == std::string::npos) throw DomainError("not a composite symbol: " + ab);
    return {ab.substr(0, pos), ab.substr(pos + 1)};
}

bool is_deterministic(const TimedAutomaton& a) {
    if (a.initial.size() != 1) return false;
    for (const auto& t : a.transitions)
        if (!t.label) return false;

    // Jointly satisfiable guards are found by enumerating regions over the
    // clocks the two guards mention; satisfiability over a subset lifts to
    // the full clock set since absent clocks are unconstrained.
    for (std::size_t i = 0; i < a.transitions.size(); ++i) {
        for (std::size_t j = i + 1; j < a.transitions.size(); ++j) {
            const auto& s = a.transitions[i];
            const auto& t = a.transitions[j];
            if (s.from != t.from || s.label != t.label) continue;
            if (s.to == t.to && s.resets == t.resets) continue;
            ClockConstraint both = s.guard && t.guard;
            ClockId maxc = both.max_clock();
            std::int64_t m = std::max<std::int64_t>(1, both.max_constant());
            bool overlap = false;
            for (const Region& r : enumerate_regions(maxc + 1, m)) {
                if (r.satisfies(both)) {
                    overlap = true;
                    break;
                }
            }
            if (overlap) return false;
        }
    }
    return true;
}

TimedAutomaton drop_unused_clocks(const TimedAutomaton& a) {
    std::vector<bool> used(static_cast<std::size_t>(a.clocks.size()), false);
    std::function<void(const ClockConstraint::Node&)> walk = [&](const ClockConstraint::Node& n) {
        if (n.kind == ClockConstraint::Kind::Atom || n.kind == ClockConstraint::Kind::DiffAtom) {
            used.at(static_cast<std::size_t>(n.x)) = true;
            if (n.y >= 0) used.at(static_cast<std::size_t>(n.y)) = true;
        }
        if (n.a) walk(*n.a);
        if (n.b) walk(*n.b);
    };
    for (const auto& t : a.transitions) walk(t.guard.root());

    std::vector<std::string> kept;
    std::vector<ClockId> remap(static_cast<std::size_t>(a.clocks.size()), -1);
    for (ClockId c = 0; c < a.clocks.size(); ++c) {
        if (used[static_cast<std::size_t>(c)]) {
            remap[static_cast<std::size_t>(c)] = static_cast<ClockId>(kept.size());
            kept.push_back(a.clocks.name(c));
        }
    }
    if (kept.size() == static_cast<std::size_t>(a.clocks.size())) return a;

    TimedAutomaton out = a;
    out.clocks = ClockSet(kept);
    for (auto& t : out.transitions) {
        t.guard = t.guard.remap_clocks(remap);
        ClockSubset r;
        for (ClockId c = 0; c < a.clocks.size(); ++c)
            if (t.resets.contains(c) && remap[static_cast<std::size_t>(c)] >= 0)
                r = r.with(remap[static_cast<std::size_t>(c)]);
        t.resets = r;
    }
    return out;
}

}  // namespace tsyn
