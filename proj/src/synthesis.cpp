#include "tsyn/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "tsyn/errors.hpp"
#include "tsyn/monitors.hpp"
#include "tsyn/omega.hpp"

namespace tsyn {

int KMController::region_index(const Region& r) const {
    for (std::size_t i = 0; i < regions.size(); ++i)
        if (regions[i].same_class(r)) return static_cast<int>(i);
    throw InternalError("region outside the controller's region table");
}

void KMController::validate() const {
    if (regions.empty()) throw DomainError("controller without regions");
    if (update.size() !=
        static_cast<std::size_t>(memory_count) * inputs.size() * regions.size())
        throw DomainError("controller update is not total");
    for (const auto& r : update) {
        if (r.next < 0 || r.next >= memory_count) throw DomainError("controller memory out of range");
        if (r.output < 0 || r.output >= static_cast<int>(outputs.size()))
            throw DomainError("controller output out of range");
    }
}

namespace {

// Restrict an omega product to runs the (deterministic, absorbing-failure)
// monitor allows: failed runs die instead of living rejected, which keeps
// the state space lean. The monitor is Buchi with final = healthy states.
TimedAutomaton attach_safety(const TimedAutomaton& core, const TimedAutomaton& monitor) {
    TimedAutomaton c = core;
    if (c.mode == AcceptanceMode::Buchi) {
        c.mode = AcceptanceMode::GenBuchi;
        c.gen_final = {c.final};
        c.final.clear();
    }
    ProductOptions opts;
    opts.share_clocks_by_name = true;
    TimedAutomaton p = product(c, monitor, opts);
    // the last generalized set is the monitor-health marker
    std::set<LocationId> healthy = p.gen_final.back();
    p.gen_final.pop_back();

    TimedAutomaton out;
    out.alphabet = p.alphabet;
    out.clocks = p.clocks;
    out.mode = AcceptanceMode::GenBuchi;
    std::vector<LocationId> remap(static_cast<std::size_t>(p.location_count()), -1);
    for (LocationId l = 0; l < p.location_count(); ++l)
        if (healthy.count(l))
            remap[static_cast<std::size_t>(l)] = out.add_location(p.locations[static_cast<std::size_t>(l)]);
    for (LocationId l : p.initial)
        if (remap[static_cast<std::size_t>(l)] != -1) out.initial.insert(remap[static_cast<std::size_t>(l)]);
    for (const auto& fs : p.gen_final) {
        std::set<LocationId> mapped;
        for (LocationId l : fs)
            if (remap[static_cast<std::size_t>(l)] != -1) mapped.insert(remap[static_cast<std::size_t>(l)]);
        out.gen_final.push_back(std::move(mapped));
    }
    for (const auto& t : p.transitions) {
        if (remap[static_cast<std::size_t>(t.from)] == -1 || remap[static_cast<std::size_t>(t.to)] == -1)
            continue;
        out.add_transition(remap[static_cast<std::size_t>(t.from)], t.label, t.guard, t.resets,
                           remap[static_cast<std::size_t>(t.to)]);
    }
    if (out.gen_final.empty()) out.gen_final.push_back({});
    return out;
}

// Product of deterministic total monitors, accepting once any component
// fails (Buchi final = states with a failed component, which are absorbing).
TimedAutomaton violation_union(const std::vector<TimedAutomaton>& monitors) {
    if (monitors.empty()) throw InternalError("no monitors to combine");
    TimedAutomaton acc = monitors.front();
    // healthy = final (Buchi-ok convention from the builders)
    for (std::size_t i = 1; i < monitors.size(); ++i) {
        ProductOptions opts;
        opts.share_clocks_by_name = true;
        TimedAutomaton p = product(acc, monitors[i], opts);
        // gen sets: [acc-healthy, next-healthy]; healthy = intersection
        std::set<LocationId> healthy;
        for (LocationId l : p.gen_final[0])
            if (p.gen_final[1].count(l)) healthy.insert(l);
        p.mode = AcceptanceMode::Buchi;
        p.gen_final.clear();
        p.final = std::move(healthy);
        acc = std::move(p);
    }
    // flip: accept exactly the unhealthy states
    std::set<LocationId> flipped;
    for (LocationId l = 0; l < acc.location_count(); ++l)
        if (!acc.final.count(l)) flipped.insert(l);
    acc.final = std::move(flipped);
    return acc;
}

// Lift a condition over proper letters to the enriched alphabet: letters
// with a tick component elapse time only; acceptance additionally demands
// infinitely many proper letters.
TimedAutomaton tick_lift(const TimedAutomaton& w_buchi, const EnrichedAlphabet& ea) {
    TimedAutomaton out;
    out.alphabet = ea.pair_symbols();
    out.clocks = w_buchi.clocks;
    out.mode = AcceptanceMode::GenBuchi;
    auto loc_of = [&](LocationId l, int flag) { return l * 2 + flag; };
    for (LocationId l = 0; l < w_buchi.location_count(); ++l) {
        out.locations.push_back(w_buchi.locations[static_cast<std::size_t>(l)] + "~i");
        out.locations.push_back(w_buchi.locations[static_cast<std::size_t>(l)] + "~p");
    }
    for (LocationId l : w_buchi.initial) out.initial.insert(loc_of(l, 0));
    std::set<LocationId> fin, proper;
    for (LocationId l : w_buchi.final) {
        fin.insert(loc_of(l, 0));
        fin.insert(loc_of(l, 1));
    }
    for (LocationId l = 0; l < w_buchi.location_count(); ++l) proper.insert(loc_of(l, 1));
    out.gen_final = {fin, proper};

    int pairs = static_cast<int>(ea.pair_symbols().size());
    // proper pair symbols indexed by (a-base, b-base)
    for (const auto& t : w_buchi.transitions) {
        if (!t.label) {
            for (int flag = 0; flag < 2; ++flag)
                out.add_transition(loc_of(t.from, flag), std::nullopt, t.guard, t.resets,
                                   loc_of(t.to, flag));
            continue;
        }
        auto [abase, bbase] = split_symbol(w_buchi.alphabet[static_cast<std::size_t>(*t.label)]);
        for (SymbolId s = 0; s < pairs; ++s) {
            auto al = ea.a_of_pair(s);
            auto bl = ea.b_of_pair(s);
            if (ea.a_is_tick(al) || ea.b_is_tick(bl)) continue;
            if (ea.base_a()[static_cast<std::size_t>(al.base)] != abase) continue;
            if (ea.base_b()[static_cast<std::size_t>(bl.base)] != bbase) continue;
            for (int flag = 0; flag < 2; ++flag)
                out.add_transition(loc_of(t.from, flag), s, t.guard, t.resets, loc_of(t.to, 1));
        }
    }
    // tick-component letters: time elapse only
    for (SymbolId s = 0; s < pairs; ++s) {
        if (!ea.a_is_tick(ea.a_of_pair(s)) && !ea.b_is_tick(ea.b_of_pair(s))) continue;
        for (LocationId l = 0; l < w_buchi.location_count(); ++l)
            for (int flag = 0; flag < 2; ++flag)
                out.add_transition(loc_of(l, flag), s, ClockConstraint::truth(), ClockSubset::none(),
                                   loc_of(l, 0));
    }
    return out;
}

TimedAutomaton build_protocol_condition(const GameSpec& g, const EnrichedAlphabet& ea,
                                        const TimedAutomaton& escape_core, std::size_t cap = 0) {
    auto guard_size = [cap](const TimedAutomaton& a) {
        if (cap && a.transitions.size() > cap)
            throw ResourceError("winning-condition construction", cap);
        return a;
    };
    TimedAutomaton w = degeneralize_ta(g.condition);
    std::vector<TimedAutomaton> wi = build_WI_monitors(ea);

    TimedAutomaton branch1 = guard_size(trim_ta(tick_lift(w, ea)));
    for (const auto& mon : wi) branch1 = guard_size(trim_ta(attach_safety(branch1, mon)));
    branch1 = drop_unused_clocks(branch1);

    TimedAutomaton branch2 = guard_size(trim_ta(escape_core));
    for (const auto& mon : wi) branch2 = guard_size(trim_ta(attach_safety(branch2, mon)));
    branch2 = drop_unused_clocks(branch2);

    return guard_size(union_ta(branch1, branch2));
}

}  // namespace

TimedAutomaton build_Wprime(const GameSpec& g, int k, std::int64_t m) {
    if (!g.zero_starting || !g.strictly_monotonic)
        throw PreconditionError("protocol conditions assume both preprocessing transforms");
    if (m < 1) throw PreconditionError("constant bound must be at least 1");
    EnrichedAlphabet ea(g.player1, g.player2, k);
    return build_protocol_condition(g, ea, violation_union(build_WII_monitors(ea, m)));
}

namespace {

// Escape branch of the bound-free condition: the play falls out of every
// bounded Player II obligation, i.e. properness parity or the response rule
// is violated at some point, or some improper request chain never ends.
TimedAutomaton unbounded_violation(const EnrichedAlphabet& ea) {
    std::vector<TimedAutomaton> letter_local = build_WII_monitors(ea, 1);
    letter_local.resize(2);  // properness parity and the response rule
    TimedAutomaton escape = violation_union(letter_local);
    for (ClockId x = 0; x < ea.clock_count(); ++x)
        escape = union_ta(escape, build_chain_guesser(ea, x));
    return escape;
}

}  // namespace

TimedAutomaton build_Wdoubleprime(const GameSpec& g, int k) {
    if (!g.zero_starting || !g.strictly_monotonic)
        throw PreconditionError("protocol conditions assume both preprocessing transforms");
    EnrichedAlphabet ea(g.player1, g.player2, k);
    return build_protocol_condition(g, ea, unbounded_violation(ea));
}

CompleteController complete_controller(const MealyController& m_enriched,
                                       const EnrichedAlphabet& ea, std::int64_t m) {
    m_enriched.validate();
    if (m_enriched.inputs != ea.a_tokens() || m_enriched.outputs != ea.b_tokens())
        throw PreconditionError("controller alphabets do not match the enriched game");
    int k = ea.clock_count();
    Region r0 = region_of(ClockValuation(k), m);

    std::vector<std::tuple<int, Region, FractionalRegion>> states;
    auto intern = [&](int mem, const Region& r, const FractionalRegion& f) -> int {
        for (std::size_t i = 0; i < states.size(); ++i) {
            auto& [em, er, ef] = states[i];
            if (em == mem && er.same_class(r) && ef == f) return static_cast<int>(i);
        }
        states.emplace_back(mem, r, f);
        return static_cast<int>(states.size() - 1);
    };

    int init = intern(m_enriched.initial, r0, FractionalRegion::empty());
    std::vector<std::vector<std::pair<int, int>>> rows;  // per state, per a-letter
    for (std::size_t cur = 0; cur < states.size(); ++cur) {
        auto [mem, r, f] = states[cur];
        std::vector<std::pair<int, int>> row;
        for (std::size_t ai = 0; ai < ea.a_letters().size(); ++ai) {
            const auto& al = ea.a_letters()[ai];
            const FractionalRegion& fin = ea.fregs()[static_cast<std::size_t>(al.freg)];
            auto [mem2, out_idx] = m_enriched.step(mem, static_cast<int>(ai));
            const auto& bl = ea.b_letters()[static_cast<std::size_t>(out_idx)];
            Region r2 = r;
            FractionalRegion f2 = f;
            auto rhat = xsuccessor(r, fin);
            if (rhat) {
                bool proper = !ea.a_is_tick(al);
                r2 = proper ? region_reset(*rhat, bl.requests) : *rhat;
                f2 = fin.drop_ones().reset_extend(bl.requests, k);
                if (!agrees(f2, r2))
                    throw InternalError("completion lost agreement between tracked data");
            }
            // no agreeing successor: the submitted data is impossible and the
            // play is already won; freeze the tracked data
            row.emplace_back(intern(mem2, r2, f2), out_idx);
        }
        rows.push_back(std::move(row));
    }

    CompleteController out;
    out.machine.inputs = ea.a_tokens();
    out.machine.outputs = ea.b_tokens();
    out.machine.memory_count = static_cast<int>(states.size());
    out.machine.initial = init;
    out.machine.update.reserve(states.size() * ea.a_letters().size());
    for (const auto& row : rows)
        for (auto [nx, o] : row) out.machine.update.emplace_back(nx, o);
    out.machine.validate();
    for (auto& [mem, r, f] : states) {
        out.mem_base.push_back(mem);
        out.mem_region.push_back(r);
        out.mem_freg.push_back(f);
    }
    return out;
}

KMController lift_controller(const CompleteController& mc, const EnrichedAlphabet& ea,
                             std::int64_t m) {
    mc.machine.validate();
    int k = ea.clock_count();
    KMController out;
    out.inputs = ea.base_a();
    out.outputs = ea.base_b();
    out.clocks = ea.clocks();
    out.max_constant = m;
    out.regions = enumerate_regions(k, m);
    out.memory_count = mc.machine.memory_count;
    out.initial = mc.machine.initial;

    int lexi_first_b = 0;
    for (std::size_t b = 1; b < out.outputs.size(); ++b)
        if (out.outputs[b] < out.outputs[static_cast<std::size_t>(lexi_first_b)])
            lexi_first_b = static_cast<int>(b);

    // chain position of target relative to `from`: -1 when unreachable
    auto chain_index = [&](const Region& from, const Region& target) {
        Region cur = from;
        int idx = 0;
        while (true) {
            if (cur.same_class(target)) return idx;
            Region nx = region_time_successor(cur);
            if (nx.same_class(cur)) return -1;
            cur = nx;
            ++idx;
        }
    };

    // One proper move may hide several improper protocol rounds: a tick is
    // simulated at every fractional boundary strictly before the observed
    // region, and a proper letter sitting exactly on a boundary carries the
    // advanced fractional region itself.
    std::size_t max_depth = out.regions.size() + 2;
    std::function<KMController::Rule(int, int, const Region&, std::size_t)> resolve =
        [&](int mem, int base_a, const Region& rhat, std::size_t depth) -> KMController::Rule {
        if (depth > max_depth) throw InternalError("lift recursion exceeded the region chain");
        const Region& r = mc.mem_region[static_cast<std::size_t>(mem)];
        const FractionalRegion& f = mc.mem_freg[static_cast<std::size_t>(mem)];
        int at = chain_index(r, rhat);
        if (at < 0) {
            // the observed region is impossible given the protocol history;
            // any fixed reply does (the play is already won)
            return {mem, lexi_first_b, ClockSubset::none()};
        }
        auto base_step = [&](const FractionalRegion& submitted) -> KMController::Rule {
            int ai = ea.a_token_index(base_a, submitted);
            auto [mem2, out_idx] = mc.machine.step(mem, ai);
            const auto& bl = ea.b_letters()[static_cast<std::size_t>(out_idx)];
            int b = ea.b_is_tick(bl) ? lexi_first_b : bl.base;
            return {mem2, b, bl.requests};
        };
        if (f.is_empty()) return base_step(f);
        FractionalRegion f2 = f.immediate_successor();
        auto boundary = xsuccessor(r, f2);
        if (!boundary) return base_step(f);
        int bnd = chain_index(r, *boundary);
        if (at < bnd) return base_step(f);
        if (at == bnd) return base_step(f2);
        int tick_ai = ea.a_token_index(-1, f2);
        auto [mem2, out_idx] = mc.machine.step(mem, tick_ai);
        (void)out_idx;
        return resolve(mem2, base_a, rhat, depth + 1);
    };

    out.update.reserve(static_cast<std::size_t>(out.memory_count) * out.inputs.size() *
                       out.regions.size());
    for (int mem = 0; mem < out.memory_count; ++mem)
        for (std::size_t a = 0; a < out.inputs.size(); ++a)
            for (const Region& rhat : out.regions)
                out.update.push_back(resolve(mem, static_cast<int>(a), rhat, 0));
    out.validate();
    return out;
}

KMController minimize_controller(const KMController& m) {
    m.validate();
    std::size_t row = m.inputs.size() * m.regions.size();
    // reachable memories
    std::vector<int> order;
    std::vector<int> remap(static_cast<std::size_t>(m.memory_count), -1);
    remap[static_cast<std::size_t>(m.initial)] = 0;
    order.push_back(m.initial);
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = 0; j < row; ++j) {
            int nx = m.update[static_cast<std::size_t>(order[i]) * row + j].next;
            if (remap[static_cast<std::size_t>(nx)] == -1) {
                remap[static_cast<std::size_t>(nx)] = static_cast<int>(order.size());
                order.push_back(nx);
            }
        }
    }
    int n = static_cast<int>(order.size());

    // partition refinement; outputs and resets are both observable
    std::vector<int> block(static_cast<std::size_t>(n), 0);
    {
        std::map<std::vector<std::int64_t>, int> ids;
        for (int v = 0; v < n; ++v) {
            std::vector<std::int64_t> sig;
            for (std::size_t j = 0; j < row; ++j) {
                const auto& r = m.update[static_cast<std::size_t>(order[static_cast<std::size_t>(v)]) * row + j];
                sig.push_back(r.output);
                sig.push_back(static_cast<std::int64_t>(r.resets.raw()));
            }
            auto [it, _] = ids.emplace(std::move(sig), static_cast<int>(ids.size()));
            block[static_cast<std::size_t>(v)] = it->second;
        }
    }
    while (true) {
        std::map<std::vector<int>, int> ids;
        std::vector<int> next(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            std::vector<int> sig{block[static_cast<std::size_t>(v)]};
            for (std::size_t j = 0; j < row; ++j) {
                const auto& r = m.update[static_cast<std::size_t>(order[static_cast<std::size_t>(v)]) * row + j];
                sig.push_back(block[static_cast<std::size_t>(remap[static_cast<std::size_t>(r.next)])]);
            }
            auto [it, _] = ids.emplace(std::move(sig), static_cast<int>(ids.size()));
            next[static_cast<std::size_t>(v)] = it->second;
        }
        if (next == block) break;
        block = std::move(next);
    }
    int blocks = *std::max_element(block.begin(), block.end()) + 1;

    KMController out;
    out.inputs = m.inputs;
    out.outputs = m.outputs;
    out.clocks = m.clocks;
    out.max_constant = m.max_constant;
    out.regions = m.regions;
    out.memory_count = blocks;
    out.initial = block[0];
    out.update.assign(static_cast<std::size_t>(blocks) * row, {0, 0, ClockSubset::none()});
    for (int v = 0; v < n; ++v) {
        for (std::size_t j = 0; j < row; ++j) {
            const auto& r = m.update[static_cast<std::size_t>(order[static_cast<std::size_t>(v)]) * row + j];
            out.update[static_cast<std::size_t>(block[static_cast<std::size_t>(v)]) * row + j] = {
                block[static_cast<std::size_t>(remap[static_cast<std::size_t>(r.next)])], r.output,
                r.resets};
        }
    }
    out.validate();
    return out;
}

ConformRun simulate_controller(const KMController& m, const std::vector<TimedLetter>& moves) {
    m.validate();
    ConformRun run;
    run.initial_memory = m.initial;
    run.initial_valuation = ClockValuation(m.clock_count());
    int mem = m.initial;
    ClockValuation mu = run.initial_valuation;
    Rational prev(0);
    for (const auto& mv : moves) {
        if (mv.time < prev) throw DomainError("controller moves must be monotone");
        auto input = std::find(m.inputs.begin(), m.inputs.end(), mv.symbol);
        if (input == m.inputs.end()) throw DomainError("unknown controller input: " + mv.symbol);
        Rational delta = mv.time - prev;
        ClockValuation moved = mu.plus(delta);
        int region = m.region_index(region_of(moved, m.max_constant));
        auto rule = m.rule(mem, static_cast<int>(input - m.inputs.begin()), region);
        mu = moved.reset(rule.resets);
        mem = rule.next;
        prev = mv.time;
        run.steps.push_back({mv.symbol, m.outputs[static_cast<std::size_t>(rule.output)], mv.time,
                             mem, mu});
    }
    return run;
}

ControllerVerdict verify_controller(const KMController& m, const GameSpec& g, std::size_t cap) {
    m.validate();
    g.validate();
    TimedAutomaton w = degeneralize_ta(g.condition);

    TimedAutomaton loop;
    loop.alphabet = g.player1;
    loop.mode = AcceptanceMode::Buchi;
    // controller clocks renamed apart from the condition's
    std::vector<std::string> names = w.clocks.names();
    std::vector<ClockId> cmap;
    {
        ClockSet tmp(names);
        for (ClockId c = 0; c < m.clocks.size(); ++c) {
            std::string nm = tmp.fresh_name("ctl_" + m.clocks.name(c));
            names.push_back(nm);
            tmp = ClockSet(names);
            cmap.push_back(static_cast<ClockId>(names.size() - 1));
        }
    }
    loop.clocks = ClockSet(names);
    auto loc_of = [&](int mem, LocationId wl) { return mem * w.location_count() + wl; };
    for (int mem = 0; mem < m.memory_count; ++mem)
        for (LocationId wl = 0; wl < w.location_count(); ++wl)
            loop.locations.push_back("m" + std::to_string(mem) + "*" +
                                     w.locations[static_cast<std::size_t>(wl)]);
    for (LocationId wl : w.initial) loop.initial.insert(loc_of(m.initial, wl));
    for (int mem = 0; mem < m.memory_count; ++mem)
        for (LocationId wl : w.final) loop.final.insert(loc_of(mem, wl));

    auto remap_resets = [&](ClockSubset s) {
        ClockSubset r;
        for (ClockId c = 0; c < m.clocks.size(); ++c)
            if (s.contains(c)) r = r.with(cmap[static_cast<std::size_t>(c)]);
        return r;
    };

    for (int mem = 0; mem < m.memory_count; ++mem) {
        for (std::size_t a = 0; a < m.inputs.size(); ++a) {
            for (std::size_t ri = 0; ri < m.regions.size(); ++ri) {
                auto rule = m.rule(mem, static_cast<int>(a), static_cast<int>(ri));
                ClockConstraint region_guard =
                    m.regions[ri].characteristic_constraint().remap_clocks(cmap);
                std::string pair = compose_symbol(m.inputs[a],
                                                  m.outputs[static_cast<std::size_t>(rule.output)]);
                auto wsym = w.find_symbol(pair);
                if (!wsym) continue;  // the condition never observes this pair
                for (const auto& t : w.transitions) {
                    if (!t.label || *t.label != *wsym) continue;
                    loop.add_transition(loc_of(mem, t.from),
                                        loop.require_symbol(m.inputs[a]),
                                        region_guard && t.guard,
                                        remap_resets(rule.resets).union_with(t.resets),
                                        loc_of(rule.next, t.to));
                }
            }
        }
    }
    for (const auto& t : w.transitions) {
        if (t.label) continue;
        for (int mem = 0; mem < m.memory_count; ++mem)
            loop.add_transition(loc_of(mem, t.from), std::nullopt, t.guard, t.resets,
                                loc_of(mem, t.to));
    }

    auto res = nta_emptiness(loop, cap);
    if (res.empty) return {true, std::nullopt};
    std::vector<int> prefix = res.witness->stem;
    for (int i = 0; i < 3; ++i)
        prefix.insert(prefix.end(), res.witness->loop.begin(), res.witness->loop.end());
    return {false, instantiate_witness(loop, res.graph, prefix)};
}

namespace {

// Fused lowering: replay the complete controller through the protocol
// (ticks at fractional boundaries), undo the repeat-flag encoding (repeats
// consulted at the infinitesimally nudged region), and consume the fresh
// start letter — exploring only reachable (memory, stored region) pairs.
KMController lower_controller(const CompleteController& mc, const EnrichedAlphabet& ea,
                              std::int64_t m, const std::string& start_symbol,
                              const std::vector<std::string>& original_inputs) {
    int k = ea.clock_count();
    std::vector<Region> regions = enumerate_regions(k, m);
    auto region_index = [&](const Region& r) {
        for (std::size_t i = 0; i < regions.size(); ++i)
            if (regions[i].same_class(r)) return static_cast<int>(i);
        throw InternalError("region outside the enumeration");
    };

    int lexi_first_b = 0;
    for (std::size_t b = 1; b < ea.base_b().size(); ++b)
        if (ea.base_b()[b] < ea.base_b()[static_cast<std::size_t>(lexi_first_b)])
            lexi_first_b = static_cast<int>(b);

    auto chain_index = [&](const Region& from, const Region& target) {
        Region cur = from;
        int idx = 0;
        while (true) {
            if (cur.same_class(target)) return idx;
            Region nx = region_time_successor(cur);
            if (nx.same_class(cur)) return -1;
            cur = nx;
            ++idx;
        }
    };

    auto flagged_base = [&](const std::string& base, int flag) {
        std::string want = base + "#" + std::to_string(flag);
        for (std::size_t i = 0; i < ea.base_a().size(); ++i)
            if (ea.base_a()[i] == want) return static_cast<int>(i);
        throw InternalError("missing flagged letter " + want);
    };

    std::size_t max_depth = regions.size() + 2;
    std::function<KMController::Rule(int, int, const Region&, std::size_t)> resolve =
        [&](int mem, int base_a, const Region& rhat, std::size_t depth) -> KMController::Rule {
        if (depth > max_depth) throw InternalError("lift recursion exceeded the region chain");
        const Region& r = mc.mem_region[static_cast<std::size_t>(mem)];
        const FractionalRegion& f = mc.mem_freg[static_cast<std::size_t>(mem)];
        int at = chain_index(r, rhat);
        if (at < 0) return {mem, lexi_first_b, ClockSubset::none()};
        auto base_step = [&](const FractionalRegion& submitted) -> KMController::Rule {
            int ai = ea.a_token_index(base_a, submitted);
            auto [mem2, out_idx] = mc.machine.step(mem, ai);
            const auto& bl = ea.b_letters()[static_cast<std::size_t>(out_idx)];
            int b = ea.b_is_tick(bl) ? lexi_first_b : bl.base;
            return {mem2, b, bl.requests};
        };
        if (f.is_empty()) return base_step(f);
        FractionalRegion f2 = f.immediate_successor();
        auto boundary = xsuccessor(r, f2);
        if (!boundary) return base_step(f);
        int bnd = chain_index(r, *boundary);
        if (at < bnd) return base_step(f);
        if (at == bnd) return base_step(f2);
        int tick_ai = ea.a_token_index(-1, f2);
        auto [mem2, out_idx] = mc.machine.step(mem, tick_ai);
        (void)out_idx;
        return resolve(mem2, base_a, rhat, depth + 1);
    };

    // infinitesimal nudge for repeat-flag rules
    std::vector<int> nudged(regions.size());
    for (std::size_t rin = 0; rin < regions.size(); ++rin) {
        bool boundary = false;
        for (ClockId c = 0; c < k; ++c)
            if (!regions[rin].above_max(c) && regions[rin].frac_zero(c)) boundary = true;
        nudged[rin] = boundary ? region_index(region_time_successor(regions[rin]))
                               : static_cast<int>(rin);
    }

    int r0 = region_index(region_of(ClockValuation(k), m));

    KMController out;
    out.inputs = original_inputs;
    out.outputs = ea.base_b();
    out.clocks = ea.clocks();
    out.max_constant = m;
    out.regions = regions;

    std::map<std::pair<int, int>, int> index;  // (complete memory, stored region)
    std::vector<std::pair<int, int>> states;
    auto intern = [&](int mem, int stored) {
        auto [it, fresh] = index.emplace(std::make_pair(mem, stored),
                                         static_cast<int>(states.size()));
        if (fresh) states.emplace_back(mem, stored);
        return it->second;
    };

    // the stored component is the region of the controller valuation right
    // after a move (input region with the rule's resets applied): a repeated
    // input region then means no observable time passed
    auto after_move = [&](int rin, ClockSubset resets) {
        return region_index(region_reset(regions[static_cast<std::size_t>(rin)], resets));
    };

    // the start letter opens the play at time 0 in the all-zero region
    KMController::Rule start_rule =
        resolve(mc.machine.initial, flagged_base(start_symbol, 0),
                regions[static_cast<std::size_t>(nudged[static_cast<std::size_t>(r0)])], 0);
    out.initial = intern(start_rule.next, after_move(r0, start_rule.resets));

    std::vector<KMController::Rule> rows;
    for (std::size_t cur = 0; cur < states.size(); ++cur) {
        auto [mem, stored] = states[cur];
        for (const auto& base : original_inputs) {
            for (std::size_t rin = 0; rin < regions.size(); ++rin) {
                bool repeat = static_cast<int>(rin) == stored;
                KMController::Rule rule =
                    repeat ? resolve(mem, flagged_base(base, 0),
                                     regions[static_cast<std::size_t>(nudged[rin])], 0)
                           : resolve(mem, flagged_base(base, 1), regions[rin], 0);
                rows.push_back({intern(rule.next, after_move(static_cast<int>(rin), rule.resets)),
                                rule.output, rule.resets});
            }
        }
    }
    out.memory_count = static_cast<int>(states.size());
    out.update = std::move(rows);
    out.validate();
    return minimize_controller(out);
}

KMController wrap_untimed(const MealyController& m, const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs, std::int64_t mc) {
    KMController out;
    out.inputs = inputs;
    out.outputs = outputs;
    out.clocks = ClockSet(std::vector<std::string>{});
    out.max_constant = mc;
    out.regions = enumerate_regions(0, mc);
    out.memory_count = m.memory_count;
    out.initial = m.initial;
    out.update.reserve(static_cast<std::size_t>(m.memory_count) * inputs.size());
    for (int mem = 0; mem < m.memory_count; ++mem)
        for (std::size_t a = 0; a < inputs.size(); ++a) {
            auto [nx, o] = m.step(mem, static_cast<int>(a));
            out.update.push_back({nx, o, ClockSubset::none()});
        }
    out.validate();
    return out;
}

UntimedAutomaton untimed_condition(const TimedAutomaton& w, std::size_t region_cap) {
    TimedAutomaton deg = degeneralize_ta(w);
    std::int64_t mm = std::max<std::int64_t>(deg.max_constant(), 0);
    UntimedAutomaton n = region_automaton(deg, mm, region_cap);
    n = degeneralize(n);
    if (n.has_epsilon()) n = remove_epsilon(n);
    n = bisim_quotient(trim_omega(n));
    return n;
}

}  // namespace

std::optional<KMController> solve_km(const GameSpec& g, int k, std::int64_t m,
                                     const SynthesisOptions& opts) {
    g.validate();
    if (k < 0) throw DomainError("negative clock budget");
    if (k > 0 && m < 1)
        throw PreconditionError("positive clock budgets need a constant bound of at least 1");

    if (k == 0) {
        UntimedAutomaton n = untimed_condition(g.condition, opts.region_cap);
        auto mm = decide_00_synthesis(g.player1, g.player2, n, opts.determinization_cap);
        if (!mm) return std::nullopt;
        KMController out = wrap_untimed(*mm, g.player1, g.player2, std::max<std::int64_t>(m, 0));
        if (opts.verify) {
            auto verdict = verify_controller(out, g, opts.region_cap);
            if (!verdict.winning)
                throw InternalError("synthesized controller failed the closed-loop check on " + verdict.counterexample->str());
        }
        return out;
    }

    GameSpec g1 = zero_starting_transform(g);
    std::string start_symbol = g1.player1.back();
    GameSpec g2 = strict_monotonic_transform_impl(g1, false);
    EnrichedAlphabet ea(g2.player1, g2.player2, k);

    TimedAutomaton wprime = build_protocol_condition(
        g2, ea, violation_union(build_WII_monitors(ea, m)), opts.region_cap);
    UntimedAutomaton n = untimed_condition(wprime, opts.region_cap);
    auto muntimed = decide_00_synthesis(ea.a_tokens(), ea.b_tokens(), n, opts.determinization_cap);
    if (!muntimed) return std::nullopt;

    CompleteController complete = complete_controller(*muntimed, ea, m);
    KMController k0 = lower_controller(complete, ea, m, start_symbol, g.player1);
    if (opts.verify) {
        auto verdict = verify_controller(k0, g, opts.region_cap);
        if (!verdict.winning)
            throw InternalError("synthesized controller failed the closed-loop check on " + verdict.counterexample->str());
    }
    return k0;
}

std::optional<KSolution> solve_k(const GameSpec& g, int k, const SynthesisOptions& opts) {
    g.validate();
    if (k < 0) throw DomainError("negative clock budget");
    if (k == 0) {
        auto r = solve_km(g, 0, 0, opts);
        if (!r) return std::nullopt;
        return KSolution{0, *r, r->memory_count, static_cast<int>(g.player1.size())};
    }

    GameSpec g1 = zero_starting_transform(g);
    std::string start_symbol = g1.player1.back();
    GameSpec g2 = strict_monotonic_transform_impl(g1, false);
    EnrichedAlphabet ea(g2.player1, g2.player2, k);

    TimedAutomaton wdp =
        build_protocol_condition(g2, ea, unbounded_violation(ea), opts.region_cap);
    UntimedAutomaton n = untimed_condition(wdp, opts.region_cap);
    auto muntimed = decide_00_synthesis(ea.a_tokens(), ea.b_tokens(), n, opts.determinization_cap);
    if (!muntimed) return std::nullopt;

    std::int64_t m = static_cast<std::int64_t>(ea.a_letters().size()) *
                         static_cast<std::int64_t>(muntimed->memory_count) +
                     1;
    CompleteController complete = complete_controller(*muntimed, ea, m);
    KMController k0 = lower_controller(complete, ea, m, start_symbol, g.player1);
    if (opts.verify) {
        auto verdict = verify_controller(k0, g, opts.region_cap);
        if (!verdict.winning)
            throw InternalError("synthesized controller failed the closed-loop check on " + verdict.counterexample->str());
    }
    return KSolution{m, k0, muntimed->memory_count, static_cast<int>(ea.a_letters().size())};
}

}  // namespace tsyn
