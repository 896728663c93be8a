#include <algorithm>
#include <numeric>

#include "tsyn/errors.hpp"
#include "tsyn/region.hpp"
#include "tsyn/region_automaton.hpp"
#include "tsyn/timed_automaton.hpp"

namespace tsyn {

namespace {

ClockConstraint scale_guard(const ClockConstraint& c, std::int64_t factor) {
    std::function<ClockConstraint(const ClockConstraint::Node&)> walk =
        [&](const ClockConstraint::Node& n) -> ClockConstraint {
        using Kind = ClockConstraint::Kind;
        switch (n.kind) {
            case Kind::True: return ClockConstraint::truth();
            case Kind::False: return ClockConstraint::falsity();
            case Kind::Atom: return ClockConstraint::atom(n.x, n.rel, n.bound * factor);
            case Kind::DiffAtom: return ClockConstraint::diff_atom(n.x, n.y, n.rel, n.bound * factor);
            case Kind::Not: return !walk(*n.a);
            case Kind::And: return walk(*n.a) && walk(*n.b);
            case Kind::Or: return walk(*n.a) || walk(*n.b);
        }
        return ClockConstraint::truth();
    };
    return walk(c.root());
}

}  // namespace

bool accepts_finite(const TimedAutomaton& a, const TimedWord& w) {
    if (a.mode != AcceptanceMode::Finite)
        throw PreconditionError("finite-word membership needs a finite-word automaton");
    for (const auto& l : w.letters()) a.require_symbol(l.symbol);

    // Scale all timestamps and constants to integers so that integer-constant
    // region theory applies directly.
    std::int64_t den = 1;
    for (const auto& l : w.letters()) den = std::lcm(den, l.time.den());

    TimedAutomaton prod;
    prod.alphabet = a.alphabet;
    prod.mode = AcceptanceMode::Finite;
    std::vector<std::string> clock_names = a.clocks.names();
    std::string wc = ClockSet(clock_names).fresh_name("wclk");
    clock_names.push_back(wc);
    prod.clocks = ClockSet(clock_names);
    ClockId word_clock = prod.clocks.size() - 1;

    // locations: (automaton location, word position 0..n)
    int n = static_cast<int>(w.size());
    auto loc_of = [&](LocationId l, int pos) { return l * (n + 1) + pos; };
    for (LocationId l = 0; l < a.location_count(); ++l)
        for (int pos = 0; pos <= n; ++pos)
            prod.locations.push_back(a.locations[static_cast<std::size_t>(l)] + "#" +
                                     std::to_string(pos));
    for (LocationId l : a.initial) prod.initial.insert(loc_of(l, 0));
    for (LocationId l : a.final) prod.final.insert(loc_of(l, n));

    Rational prev(0);
    std::vector<std::int64_t> gaps;
    for (const auto& l : w.letters()) {
        Rational gap = (l.time - prev) * Rational(den);
        if (!gap.is_integer()) throw InternalError("scaled gap not integral");
        gaps.push_back(gap.num());
        prev = l.time;
    }

    for (const auto& t : a.transitions) {
        ClockConstraint guard = scale_guard(t.guard, den);
        if (!t.label) {
            for (int pos = 0; pos <= n; ++pos)
                prod.add_transition(loc_of(t.from, pos), std::nullopt, guard, t.resets,
                                    loc_of(t.to, pos));
        } else {
            for (int pos = 0; pos < n; ++pos) {
                if (a.alphabet[static_cast<std::size_t>(*t.label)] !=
                    w.letters()[static_cast<std::size_t>(pos)].symbol)
                    continue;
                ClockConstraint timing =
                    ClockConstraint::atom(word_clock, Rel::Eq, gaps[static_cast<std::size_t>(pos)]);
                prod.add_transition(loc_of(t.from, pos), t.label, guard && timing,
                                    t.resets.with(word_clock), loc_of(t.to, pos + 1));
            }
        }
    }
    return !nta_emptiness(prod).empty;
}

TimedAutomaton regionise(const TimedAutomaton& d, std::int64_t m) {
    if (!is_deterministic(d)) throw PreconditionError("regionise needs a deterministic automaton");
    if (m < d.max_constant()) throw PreconditionError("regionise needs m >= the max constant");

    TimedAutomaton out;
    out.alphabet = d.alphabet;
    out.clocks = d.clocks;
    out.locations = d.locations;
    out.mode = d.mode;
    out.initial = d.initial;
    out.final = d.final;
    out.gen_final = d.gen_final;
    LocationId sink = out.add_location("reject_sink");

    std::vector<Region> regions = enumerate_regions(d.clocks.size(), m);
    for (LocationId l = 0; l <= d.location_count(); ++l) {
        bool is_sink = l == d.location_count();
        for (SymbolId s = 0; s < d.symbol_count(); ++s) {
            for (const Region& r : regions) {
                ClockConstraint phi = r.characteristic_constraint();
                if (is_sink) {
                    out.add_transition(sink, s, phi, ClockSubset::none(), sink);
                    continue;
                }
                const TimedTransition* hit = nullptr;
                for (const auto& t : d.transitions) {
                    if (t.from != l || !t.label || *t.label != s) continue;
                    if (r.satisfies(t.guard)) {
                        hit = &t;
                        break;
                    }
                }
                if (hit)
                    out.add_transition(l, s, phi, hit->resets, hit->to);
                else
                    out.add_transition(l, s, phi, ClockSubset::none(), sink);
            }
        }
    }
    return out;
}

TimedAutomaton complement_dta(const TimedAutomaton& d) {
    if (d.mode != AcceptanceMode::Finite)
        throw PreconditionError("complement is defined for finite-word automata");
    TimedAutomaton total = regionise(d, std::max<std::int64_t>(d.max_constant(), 0));
    std::set<LocationId> flipped;
    for (LocationId l = 0; l < total.location_count(); ++l)
        if (!total.final.count(l)) flipped.insert(l);
    total.final = std::move(flipped);
    return total;
}

TimedAutomaton product(const TimedAutomaton& a, const TimedAutomaton& b,
                       const ProductOptions& opts) {
    if (a.alphabet != b.alphabet) throw PreconditionError("product needs a shared alphabet");
    if (a.mode != b.mode && !(a.mode != AcceptanceMode::Finite && b.mode != AcceptanceMode::Finite))
        throw PreconditionError("product operands must agree on finite vs omega acceptance");

    TimedAutomaton out;
    out.alphabet = a.alphabet;

    // clock fusion
    std::vector<ClockId> amap, bmap;
    std::vector<std::string> names;
    if (opts.share_clocks_by_name) {
        names = a.clocks.names();
        for (ClockId c = 0; c < a.clocks.size(); ++c) amap.push_back(c);
        ClockSet tmp(names);
        for (ClockId c = 0; c < b.clocks.size(); ++c) {
            auto ex = tmp.find(b.clocks.name(c));
            if (ex) {
                bmap.push_back(*ex);
            } else {
                names.push_back(b.clocks.name(c));
                tmp = ClockSet(names);
                bmap.push_back(static_cast<ClockId>(names.size() - 1));
            }
        }
    } else {
        ClockSet acc;
        for (ClockId c = 0; c < a.clocks.size(); ++c) {
            std::string nm = ClockSet(names).fresh_name(a.clocks.name(c));
            names.push_back(nm);
            amap.push_back(static_cast<ClockId>(names.size() - 1));
        }
        for (ClockId c = 0; c < b.clocks.size(); ++c) {
            std::string nm = ClockSet(names).fresh_name(b.clocks.name(c));
            names.push_back(nm);
            bmap.push_back(static_cast<ClockId>(names.size() - 1));
        }
    }
    out.clocks = ClockSet(names);

    auto remap_resets = [](ClockSubset s, const std::vector<ClockId>& map, int k) {
        ClockSubset r;
        for (ClockId c = 0; c < k; ++c)
            if (s.contains(c)) r = r.with(map[static_cast<std::size_t>(c)]);
        return r;
    };

    auto loc_of = [&](LocationId la, LocationId lb) { return la * b.location_count() + lb; };
    for (LocationId la = 0; la < a.location_count(); ++la)
        for (LocationId lb = 0; lb < b.location_count(); ++lb)
            out.locations.push_back(a.locations[static_cast<std::size_t>(la)] + "*" +
                                    b.locations[static_cast<std::size_t>(lb)]);
    for (LocationId la : a.initial)
        for (LocationId lb : b.initial) out.initial.insert(loc_of(la, lb));

    for (const auto& ta : a.transitions) {
        ClockConstraint ga = ta.guard.remap_clocks(amap);
        ClockSubset ra = remap_resets(ta.resets, amap, a.clocks.size());
        if (!ta.label) {
            for (LocationId lb = 0; lb < b.location_count(); ++lb)
                out.add_transition(loc_of(ta.from, lb), std::nullopt, ga, ra, loc_of(ta.to, lb));
            continue;
        }
        for (const auto& tb : b.transitions) {
            if (!tb.label || *tb.label != *ta.label) continue;
            ClockConstraint gb = tb.guard.remap_clocks(bmap);
            ClockSubset rb = remap_resets(tb.resets, bmap, b.clocks.size());
            out.add_transition(loc_of(ta.from, tb.from), ta.label, ga && gb, ra.union_with(rb),
                               loc_of(ta.to, tb.to));
        }
    }
    for (const auto& tb : b.transitions) {
        if (tb.label) continue;
        ClockConstraint gb = tb.guard.remap_clocks(bmap);
        ClockSubset rb = remap_resets(tb.resets, bmap, b.clocks.size());
        for (LocationId la = 0; la < a.location_count(); ++la)
            out.add_transition(loc_of(la, tb.from), std::nullopt, gb, rb, loc_of(la, tb.to));
    }

    if (a.mode == AcceptanceMode::Finite) {
        out.mode = AcceptanceMode::Finite;
        for (LocationId la : a.final)
            for (LocationId lb : b.final) out.final.insert(loc_of(la, lb));
    } else {
        out.mode = AcceptanceMode::GenBuchi;
        auto lift_a = [&](const std::set<LocationId>& fs) {
            std::set<LocationId> lifted;
            for (LocationId la : fs)
                for (LocationId lb = 0; lb < b.location_count(); ++lb) lifted.insert(loc_of(la, lb));
            return lifted;
        };
        auto lift_b = [&](const std::set<LocationId>& fs) {
            std::set<LocationId> lifted;
            for (LocationId lb : fs)
                for (LocationId la = 0; la < a.location_count(); ++la) lifted.insert(loc_of(la, lb));
            return lifted;
        };
        if (a.mode == AcceptanceMode::GenBuchi)
            for (const auto& fs : a.gen_final) out.gen_final.push_back(lift_a(fs));
        else
            out.gen_final.push_back(lift_a(a.final));
        if (b.mode == AcceptanceMode::GenBuchi)
            for (const auto& fs : b.gen_final) out.gen_final.push_back(lift_b(fs));
        else
            out.gen_final.push_back(lift_b(b.final));
    }
    return out;
}

TimedAutomaton degeneralize_ta(const TimedAutomaton& a) {
    if (a.mode != AcceptanceMode::GenBuchi) return a;
    std::size_t n = a.gen_final.size();
    if (n == 1) {
        TimedAutomaton out = a;
        out.mode = AcceptanceMode::Buchi;
        out.final = a.gen_final[0];
        out.gen_final.clear();
        return out;
    }
    TimedAutomaton out;
    out.alphabet = a.alphabet;
    out.clocks = a.clocks;
    out.mode = AcceptanceMode::Buchi;
    auto loc_of = [&](LocationId l, std::size_t i) {
        return l * static_cast<int>(n) + static_cast<int>(i);
    };
    for (LocationId l = 0; l < a.location_count(); ++l)
        for (std::size_t i = 0; i < n; ++i)
            out.locations.push_back(a.locations[static_cast<std::size_t>(l)] + "/" +
                                    std::to_string(i));
    for (LocationId l : a.initial) out.initial.insert(loc_of(l, 0));
    // counter advances when the source location is in the awaited set
    for (const auto& t : a.transitions) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t next = a.gen_final[i].count(t.from) ? (i + 1) % n : i;
            out.add_transition(loc_of(t.from, i), t.label, t.guard, t.resets, loc_of(t.to, next));
        }
    }
    for (LocationId l : a.gen_final[n - 1]) out.final.insert(loc_of(l, n - 1));
    return out;
}

TimedAutomaton union_ta(const TimedAutomaton& a_in, const TimedAutomaton& b_in) {
    TimedAutomaton a = degeneralize_ta(a_in);
    TimedAutomaton b = degeneralize_ta(b_in);
    if (a.alphabet != b.alphabet) throw PreconditionError("union needs a shared alphabet");
    if (a.mode != b.mode) throw PreconditionError("union operands must share the acceptance mode");

    // Shared clock names refer to distinct branch-local clocks; branches
    // never interact, so sharing the slots is sound and keeps k small.
    TimedAutomaton out;
    out.alphabet = a.alphabet;
    out.mode = a.mode;
    std::vector<std::string> names = a.clocks.names();
    std::vector<ClockId> bmap;
    {
        ClockSet tmp(names);
        for (ClockId c = 0; c < b.clocks.size(); ++c) {
            auto ex = tmp.find(b.clocks.name(c));
            if (ex) {
                bmap.push_back(*ex);
            } else {
                names.push_back(b.clocks.name(c));
                tmp = ClockSet(names);
                bmap.push_back(static_cast<ClockId>(names.size() - 1));
            }
        }
    }
    out.clocks = ClockSet(names);

    for (LocationId l = 0; l < a.location_count(); ++l)
        out.locations.push_back("L." + a.locations[static_cast<std::size_t>(l)]);
    int off = a.location_count();
    for (LocationId l = 0; l < b.location_count(); ++l)
        out.locations.push_back("R." + b.locations[static_cast<std::size_t>(l)]);

    for (LocationId l : a.initial) out.initial.insert(l);
    for (LocationId l : b.initial) out.initial.insert(l + off);
    for (LocationId l : a.final) out.final.insert(l);
    for (LocationId l : b.final) out.final.insert(l + off);

    for (const auto& t : a.transitions) out.add_transition(t.from, t.label, t.guard, t.resets, t.to);
    for (const auto& t : b.transitions) {
        ClockSubset r;
        for (ClockId c = 0; c < b.clocks.size(); ++c)
            if (t.resets.contains(c)) r = r.with(bmap[static_cast<std::size_t>(c)]);
        out.add_transition(t.from + off, t.label, t.guard.remap_clocks(bmap), r, t.to + off);
    }
    return out;
}

TimedAutomaton inverse_projection(const TimedAutomaton& a, const std::vector<std::string>& enrich) {
    TimedAutomaton out;
    out.clocks = a.clocks;
    out.locations = a.locations;
    out.initial = a.initial;
    out.final = a.final;
    out.gen_final = a.gen_final;
    out.mode = a.mode;
    for (const auto& s : a.alphabet)
        for (const auto& e : enrich) out.alphabet.push_back(compose_symbol(s, e));
    for (const auto& t : a.transitions) {
        if (!t.label) {
            out.add_transition(t.from, std::nullopt, t.guard, t.resets, t.to);
            continue;
        }
        for (const auto& e : enrich) {
            SymbolId s = out.require_symbol(
                compose_symbol(a.alphabet[static_cast<std::size_t>(*t.label)], e));
            out.add_transition(t.from, s, t.guard, t.resets, t.to);
        }
    }
    return out;
}

TimedAutomaton suffix_omega(const TimedAutomaton& a) {
    if (a.mode != AcceptanceMode::Finite)
        throw PreconditionError("suffix extension starts from a finite-word automaton");
    TimedAutomaton out = a;
    out.mode = AcceptanceMode::Buchi;
    LocationId sink = out.add_location("omega_sink");
    for (LocationId l : a.final)
        out.add_transition(l, std::nullopt, ClockConstraint::truth(), ClockSubset::none(), sink);
    for (SymbolId s = 0; s < out.symbol_count(); ++s)
        out.add_transition(sink, s, ClockConstraint::truth(), ClockSubset::none(), sink);
    out.final = {sink};
    return out;
}

}  // namespace tsyn
