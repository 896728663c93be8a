#include <algorithm>
#include <functional>
#include <map>

#include "tsyn/errors.hpp"
#include "tsyn/synthesis.hpp"

namespace tsyn {

void GameSpec::validate() const {
    condition.validate();
    if (condition.mode == AcceptanceMode::Finite)
        throw DomainError("winning conditions are omega languages");
    for (const auto& sym : condition.alphabet) {
        auto [a, b] = split_symbol(sym);
        if (std::find(player1.begin(), player1.end(), a) == player1.end())
            throw DomainError("condition letter outside Player I alphabet: " + a);
        if (std::find(player2.begin(), player2.end(), b) == player2.end())
            throw DomainError("condition letter outside Player II alphabet: " + b);
    }
}

std::vector<Rational> collapse_timestamps(const std::vector<Rational>& times,
                                          const std::vector<bool>& flags) {
    if (times.size() != flags.size()) throw DomainError("times and flags differ in length");
    std::vector<Rational> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i == 0)
            out.push_back(times[0]);
        else
            out.push_back(flags[i] ? times[i] : out.back());
    }
    return out;
}

GameSpec zero_starting_transform(const GameSpec& g) {
    g.validate();
    GameSpec out;
    out.player2 = g.player2;
    out.zero_starting = true;
    out.strictly_monotonic = g.strictly_monotonic;

    std::string start = "start";
    while (std::find(g.player1.begin(), g.player1.end(), start) != g.player1.end()) start += "_";
    out.player1 = g.player1;
    out.player1.push_back(start);

    TimedAutomaton w = degeneralize_ta(g.condition);
    TimedAutomaton out_w;
    out_w.mode = AcceptanceMode::Buchi;
    out_w.alphabet = w.alphabet;
    for (const auto& b : g.player2) out_w.alphabet.push_back(compose_symbol(start, b));
    // a zero-test clock: reuse the first condition clock or add a fresh one
    std::vector<std::string> clock_names = w.clocks.names();
    ClockId ztest;
    if (clock_names.empty()) {
        clock_names.push_back("zs");
        ztest = 0;
    } else {
        ztest = 0;
    }
    out_w.clocks = ClockSet(clock_names);
    out_w.locations = w.locations;
    LocationId iota = out_w.add_location("zs_init");
    out_w.initial = {iota};
    out_w.final = w.final;
    for (const auto& t : w.transitions) out_w.transitions.push_back(t);
    for (const auto& b : g.player2) {
        SymbolId s = out_w.require_symbol(compose_symbol(start, b));
        for (LocationId init : w.initial)
            out_w.add_transition(iota, s, ClockConstraint::atom(ztest, Rel::Eq, 0),
                                 ClockSubset::none(), init);
    }
    out.condition = std::move(out_w);
    return out;
}

namespace {

// Guard rewriting for collapsed letters: unary atoms read x - vtime, which
// equals the clock value at the window-opening letter.
ClockConstraint virtualize_guard(const ClockConstraint& c, ClockId vtime) {
    std::function<ClockConstraint(const ClockConstraint::Node&)> walk =
        [&](const ClockConstraint::Node& n) -> ClockConstraint {
        using Kind = ClockConstraint::Kind;
        switch (n.kind) {
            case Kind::True: return ClockConstraint::truth();
            case Kind::False: return ClockConstraint::falsity();
            case Kind::Atom: return ClockConstraint::diff_atom(n.x, vtime, n.rel, n.bound);
            case Kind::DiffAtom: return ClockConstraint::diff_atom(n.x, n.y, n.rel, n.bound);
            case Kind::Not: return !walk(*n.a);
            case Kind::And: return walk(*n.a) && walk(*n.b);
            case Kind::Or: return walk(*n.a) || walk(*n.b);
        }
        return ClockConstraint::truth();
    };
    return walk(c.root());
}

std::vector<ClockId> guard_clocks(const ClockConstraint& c) {
    std::vector<ClockId> out;
    std::function<void(const ClockConstraint::Node&)> walk = [&](const ClockConstraint::Node& n) {
        if (n.kind == ClockConstraint::Kind::Atom || n.kind == ClockConstraint::Kind::DiffAtom) {
            out.push_back(n.x);
            if (n.y >= 0) out.push_back(n.y);
        }
        if (n.a) walk(*n.a);
        if (n.b) walk(*n.b);
    };
    walk(c.root());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

GameSpec strict_monotonic_transform_impl(const GameSpec& g, bool include_strict_guard) {
    g.validate();
    TimedAutomaton w = degeneralize_ta(g.condition);
    for (const auto& t : w.transitions)
        if (!t.label && (!t.guard.is_true() || !t.resets.empty()))
            throw PreconditionError(
                "the strict-monotonicity transform supports epsilon transitions only with "
                "trivial guards and no resets");

    GameSpec out;
    out.player2 = g.player2;
    out.zero_starting = g.zero_starting;
    out.strictly_monotonic = true;
    for (const auto& a : g.player1) {
        out.player1.push_back(a + "#0");
        out.player1.push_back(a + "#1");
    }

    // clocks: originals + window clock (+ strictness clock)
    std::vector<std::string> clock_names = w.clocks.names();
    ClockSet base(clock_names);
    clock_names.push_back(base.fresh_name("vtime"));
    ClockId vtime = static_cast<ClockId>(clock_names.size() - 1);
    ClockId wstep = -1;
    if (include_strict_guard) {
        clock_names.push_back(ClockSet(clock_names).fresh_name("wstep"));
        wstep = static_cast<ClockId>(clock_names.size() - 1);
    }

    // clocks that can be reset by letter transitions drive the guess space
    ClockSubset resettable;
    for (const auto& t : w.transitions)
        if (t.label) resettable = resettable.union_with(t.resets);
    std::vector<ClockSubset> guessables;
    {
        int k = w.clocks.size();
        std::uint64_t full = std::uint64_t{1} << k;
        for (std::uint64_t mask = 0; mask < full; ++mask) {
            ClockSubset s;
            for (ClockId c = 0; c < k; ++c)
                if ((mask >> c) & 1) s = s.with(c);
            if (s.subset_of(resettable)) guessables.push_back(s);
        }
    }

    // window states: start, or (available, pending) with pending within
    // available; encoded as location components
    struct ZState {
        bool start;
        ClockSubset avail;
        ClockSubset pending;
        bool operator==(const ZState&) const = default;
    };
    std::vector<ZState> zstates;
    zstates.push_back({true, {}, {}});
    for (const ClockSubset& avail : guessables)
        for (const ClockSubset& pending : guessables)
            if (pending.subset_of(avail)) zstates.push_back({false, avail, pending});
    auto zindex = [&](const ZState& z) {
        for (std::size_t i = 0; i < zstates.size(); ++i)
            if (zstates[i] == z) return static_cast<int>(i);
        throw InternalError("window state not enumerated");
    };

    TimedAutomaton ow;
    ow.mode = AcceptanceMode::GenBuchi;
    ow.clocks = ClockSet(clock_names);
    for (const auto& sym : w.alphabet) {
        auto [a, b] = split_symbol(sym);
        ow.alphabet.push_back(compose_symbol(a + "#0", b));
        ow.alphabet.push_back(compose_symbol(a + "#1", b));
    }
    auto loc_of = [&](LocationId l, int z) {
        return l * static_cast<int>(zstates.size()) + z;
    };
    for (LocationId l = 0; l < w.location_count(); ++l)
        for (std::size_t z = 0; z < zstates.size(); ++z)
            ow.locations.push_back(w.locations[static_cast<std::size_t>(l)] + "~z" +
                                   std::to_string(z));
    for (LocationId l : w.initial) ow.initial.insert(loc_of(l, 0));

    std::set<LocationId> final_lifted;
    for (LocationId l : w.final)
        for (std::size_t z = 0; z < zstates.size(); ++z) final_lifted.insert(loc_of(l, static_cast<int>(z)));
    std::set<LocationId> settled;  // no unclaimed guesses
    for (LocationId l = 0; l < w.location_count(); ++l)
        for (std::size_t z = 0; z < zstates.size(); ++z)
            if (zstates[z].pending.empty()) settled.insert(loc_of(l, static_cast<int>(z)));
    ow.gen_final = {final_lifted, settled};

    ClockConstraint strict_ok = include_strict_guard
                                    ? ClockConstraint::atom(wstep, Rel::Gt, 0)
                                    : ClockConstraint::truth();
    ClockSubset step_reset = include_strict_guard ? ClockSubset::single(wstep) : ClockSubset::none();

    for (const auto& t : w.transitions) {
        if (!t.label) {
            // bare epsilon: location change only, valid in any window state
            for (std::size_t z = 0; z < zstates.size(); ++z)
                ow.add_transition(loc_of(t.from, static_cast<int>(z)), std::nullopt,
                                  ClockConstraint::truth(), ClockSubset::none(),
                                  loc_of(t.to, static_cast<int>(z)));
            continue;
        }
        auto [abase, bbase] = split_symbol(w.alphabet[static_cast<std::size_t>(*t.label)]);
        SymbolId s0 = ow.require_symbol(compose_symbol(abase + "#0", bbase));
        SymbolId s1 = ow.require_symbol(compose_symbol(abase + "#1", bbase));
        std::vector<ClockId> mentioned = guard_clocks(t.guard);

        for (std::size_t z = 0; z < zstates.size(); ++z) {
            const ZState& zs = zstates[z];
            bool window_open = !zs.start;

            // window-opening version: at the start location both flags open a
            // window; elsewhere only flag 1 does, and only with no leftover
            // guesses
            if (zs.pending.empty()) {
                for (const ClockSubset& guess : guessables) {
                    if (!guess.intersect(t.resets).empty()) continue;  // own resets need no guess
                    ZState nz{false, guess.union_with(t.resets), guess};
                    int nzi = zindex(nz);
                    ClockSubset resets =
                        t.resets.union_with(guess).with(vtime).union_with(step_reset);
                    ClockConstraint guard1 =
                        t.guard && (zs.start ? ClockConstraint::truth() : strict_ok);
                    ow.add_transition(loc_of(t.from, static_cast<int>(z)), s1, guard1, resets,
                                      loc_of(t.to, nzi));
                    if (zs.start)
                        ow.add_transition(loc_of(t.from, static_cast<int>(z)), s0, guard1, resets,
                                          loc_of(t.to, nzi));
                }
            }

            // collapsed version: flag 0 within an open window
            if (window_open) {
                bool touches_pending = false;
                for (ClockId c : mentioned)
                    if (zs.pending.contains(c)) touches_pending = true;
                if (touches_pending) continue;  // anchored too early to read
                if (!t.resets.subset_of(zs.avail)) continue;
                ZState nz{false, zs.avail, [&] {
                              ClockSubset p = zs.pending;
                              for (ClockId c = 0; c < w.clocks.size(); ++c)
                                  if (t.resets.contains(c)) p = p.without(c);
                              return p;
                          }()};
                int nzi = zindex(nz);
                ow.add_transition(loc_of(t.from, static_cast<int>(z)), s0,
                                  virtualize_guard(t.guard, vtime) && strict_ok, step_reset,
                                  loc_of(t.to, nzi));
            }
        }
    }
    out.condition = drop_unused_clocks(std::move(ow));
    return out;
}

GameSpec strict_monotonic_transform(const GameSpec& g) {
    return strict_monotonic_transform_impl(g, true);
}

KMController undo_strict_monotonic(const KMController& k2) {
    k2.validate();
    // inputs of k2 are a#0 / a#1 pairs; rebuild the base alphabet
    std::vector<std::string> base;
    for (const auto& in : k2.inputs) {
        if (in.size() < 2 || in[in.size() - 2] != '#') throw DomainError("not a flagged input: " + in);
        std::string b = in.substr(0, in.size() - 2);
        if (std::find(base.begin(), base.end(), b) == base.end()) base.push_back(b);
    }
    auto flagged_index = [&](const std::string& b, int flag) {
        std::string want = b + "#" + std::to_string(flag);
        for (std::size_t i = 0; i < k2.inputs.size(); ++i)
            if (k2.inputs[i] == want) return static_cast<int>(i);
        throw InternalError("missing flagged input " + want);
    };

    KMController out;
    out.inputs = base;
    out.outputs = k2.outputs;
    out.clocks = k2.clocks;
    out.max_constant = k2.max_constant;
    out.regions = k2.regions;
    int regions = static_cast<int>(k2.regions.size());
    // memory: (k2 memory, region last seen on a flag-1 move)
    // flag-0 rules are consulted at the region an infinitesimal elapse
    // would reach: the fiction that backs a repeat flag nudges the letter
    // strictly after its group leader, which leaves open regions in place
    // but moves boundary regions (zero fractions) to their successor
    std::vector<int> nudged(static_cast<std::size_t>(regions));
    for (int rin = 0; rin < regions; ++rin) {
        const Region& reg = k2.regions[static_cast<std::size_t>(rin)];
        bool boundary = false;
        for (ClockId c = 0; c < k2.clocks.size(); ++c)
            if (!reg.above_max(c) && reg.frac_zero(c)) boundary = true;
        nudged[static_cast<std::size_t>(rin)] =
            boundary ? k2.region_index(region_time_successor(reg)) : rin;
    }

    // reachable part of the (memory, stored region) product only; the
    // stored region is the one right after the previous move (resets
    // applied), so a repeated input region means no observable elapse
    int r0 = k2.region_index(region_of(ClockValuation(k2.clocks.size()), k2.max_constant));
    std::map<std::pair<int, int>, int> index;
    std::vector<std::pair<int, int>> states;
    auto intern = [&](int m, int r) {
        auto [it, fresh] = index.emplace(std::make_pair(m, r), static_cast<int>(states.size()));
        if (fresh) states.emplace_back(m, r);
        return it->second;
    };
    auto after_move = [&](int rin, ClockSubset resets) {
        return k2.region_index(
            region_reset(k2.regions[static_cast<std::size_t>(rin)], resets));
    };
    out.initial = intern(k2.initial, r0);
    std::vector<KMController::Rule> rows;
    for (std::size_t cur = 0; cur < states.size(); ++cur) {
        auto [m, r] = states[cur];
        for (std::size_t a = 0; a < base.size(); ++a) {
            for (int rin = 0; rin < regions; ++rin) {
                // unchanged region reads as a repeat (flag 0); a new region
                // reads as real progress (flag 1)
                bool repeat = rin == r;
                auto r2 = repeat ? k2.rule(m, flagged_index(base[a], 0),
                                           nudged[static_cast<std::size_t>(rin)])
                                 : k2.rule(m, flagged_index(base[a], 1), rin);
                rows.push_back({intern(r2.next, after_move(rin, r2.resets)), r2.output, r2.resets});
            }
        }
    }
    out.memory_count = static_cast<int>(states.size());
    out.update = std::move(rows);
    out.validate();
    return out;
}

KMController undo_zero_starting(const KMController& k1, const std::string& start_symbol) {
    k1.validate();
    int start_idx = -1;
    for (std::size_t i = 0; i < k1.inputs.size(); ++i)
        if (k1.inputs[i] == start_symbol) start_idx = static_cast<int>(i);
    if (start_idx < 0) throw DomainError("start symbol missing from controller inputs");

    KMController out;
    for (std::size_t i = 0; i < k1.inputs.size(); ++i)
        if (static_cast<int>(i) != start_idx) out.inputs.push_back(k1.inputs[i]);
    out.outputs = k1.outputs;
    out.clocks = k1.clocks;
    out.max_constant = k1.max_constant;
    out.regions = k1.regions;
    out.memory_count = k1.memory_count;
    int r0 = k1.region_index(region_of(ClockValuation(k1.clocks.size()), k1.max_constant));
    out.initial = k1.rule(k1.initial, start_idx, r0).next;
    int regions = static_cast<int>(k1.regions.size());
    out.update.reserve(static_cast<std::size_t>(out.memory_count) * out.inputs.size() *
                       static_cast<std::size_t>(regions));
    for (int m = 0; m < k1.memory_count; ++m)
        for (std::size_t a = 0; a < k1.inputs.size(); ++a) {
            if (static_cast<int>(a) == start_idx) continue;
            for (int r = 0; r < regions; ++r) {
                auto rl = k1.rule(m, static_cast<int>(a), r);
                out.update.push_back({rl.next, rl.output, rl.resets});
            }
        }
    out.validate();
    return out;
}

}  // namespace tsyn
