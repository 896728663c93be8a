#include "tsyn/monitors.hpp"

#include "tsyn/errors.hpp"

namespace tsyn {

namespace {

std::string req_clock_name(const EnrichedAlphabet& ea, ClockId x) {
    return "req_" + ea.clocks().name(x);
}

struct MonitorBuilder {
    const EnrichedAlphabet& ea;
    TimedAutomaton m;

    MonitorBuilder(const EnrichedAlphabet& e, std::vector<std::string> clock_names)
        : ea(e) {
        m.alphabet = ea.pair_symbols();
        m.clocks = ClockSet(std::move(clock_names));
        m.mode = AcceptanceMode::Buchi;
    }

    // resets for shared consistency: req clocks of requested game clocks
    // that this monitor owns, plus "step" when present
    ClockSubset standard_resets(const EnrichedAlphabet::BLetter& bl) const {
        ClockSubset r;
        for (ClockId x = 0; x < ea.clock_count(); ++x) {
            if (!bl.requests.contains(x)) continue;
            auto c = m.clocks.find("req_" + ea.clocks().name(x));
            if (c) r = r.with(*c);
        }
        auto s = m.clocks.find("step");
        if (s) r = r.with(*s);
        return r;
    }

    void finish_buchi_ok_final(LocationId viol) {
        for (LocationId l = 0; l < m.location_count(); ++l)
            if (l != viol) m.final.insert(l);
    }
};

}  // namespace

std::vector<TimedAutomaton> build_WI_monitors(const EnrichedAlphabet& ea) {
    std::vector<TimedAutomaton> out;
    int pairs = static_cast<int>(ea.pair_symbols().size());

    // zero-starting: the first letter happens at time 0
    {
        MonitorBuilder b(ea, {"step"});
        LocationId start = b.m.add_location("start");
        LocationId run = b.m.add_location("run");
        LocationId viol = b.m.add_location("viol");
        b.m.initial = {start};
        ClockId step = 0;
        for (SymbolId s = 0; s < pairs; ++s) {
            ClockSubset r = b.standard_resets(ea.b_of_pair(s));
            b.m.add_transition(start, s, ClockConstraint::atom(step, Rel::Eq, 0), r, run);
            b.m.add_transition(start, s, ClockConstraint::atom(step, Rel::Gt, 0), r, viol);
            b.m.add_transition(run, s, ClockConstraint::truth(), r, run);
            b.m.add_transition(viol, s, ClockConstraint::truth(), r, viol);
        }
        b.finish_buchi_ok_final(viol);
        out.push_back(std::move(b.m));
    }

    // strict monotonicity: consecutive letters at distinct times
    {
        MonitorBuilder b(ea, {"step"});
        LocationId first = b.m.add_location("first");
        LocationId rest = b.m.add_location("rest");
        LocationId viol = b.m.add_location("viol");
        b.m.initial = {first};
        ClockId step = 0;
        for (SymbolId s = 0; s < pairs; ++s) {
            ClockSubset r = b.standard_resets(ea.b_of_pair(s));
            b.m.add_transition(first, s, ClockConstraint::truth(), r, rest);
            b.m.add_transition(rest, s, ClockConstraint::atom(step, Rel::Gt, 0), r, rest);
            b.m.add_transition(rest, s, ClockConstraint::atom(step, Rel::Eq, 0), r, viol);
            b.m.add_transition(viol, s, ClockConstraint::truth(), r, viol);
        }
        b.finish_buchi_ok_final(viol);
        out.push_back(std::move(b.m));
    }

    // condition: expiry claims are exact (per clock)
    for (ClockId x = 0; x < ea.clock_count(); ++x) {
        MonitorBuilder b(ea, {req_clock_name(ea, x)});
        LocationId fresh = b.m.add_location("fresh");
        LocationId reqd = b.m.add_location("reqd");
        LocationId viol = b.m.add_location("viol");
        b.m.initial = {fresh};
        ClockId rq = 0;
        auto eq1 = ClockConstraint::atom(rq, Rel::Eq, 1);
        auto lt1 = ClockConstraint::atom(rq, Rel::Lt, 1);
        auto gt1 = ClockConstraint::atom(rq, Rel::Gt, 1);
        for (SymbolId s = 0; s < pairs; ++s) {
            auto al = ea.a_of_pair(s);
            auto bl = ea.b_of_pair(s);
            const auto& f = ea.fregs()[static_cast<std::size_t>(al.freg)];
            bool claimed = f.tracks(x) && f.frac_zero(x);
            bool isreq = bl.requests.contains(x);
            ClockSubset r = b.standard_resets(bl);
            LocationId fresh_next = isreq ? reqd : fresh;
            if (claimed) {
                b.m.add_transition(fresh, s, ClockConstraint::truth(), r, viol);
                b.m.add_transition(reqd, s, eq1, r, reqd);
                b.m.add_transition(reqd, s, lt1, r, viol);
                b.m.add_transition(reqd, s, gt1, r, viol);
            } else {
                b.m.add_transition(fresh, s, ClockConstraint::truth(), r, fresh_next);
                b.m.add_transition(reqd, s, eq1, r, viol);
                b.m.add_transition(reqd, s, lt1, r, reqd);
                b.m.add_transition(reqd, s, gt1, r, reqd);
            }
            b.m.add_transition(viol, s, ClockConstraint::truth(), r, viol);
        }
        b.finish_buchi_ok_final(viol);
        out.push_back(std::move(b.m));
    }

    // condition: tracking claims match request recency (per clock)
    for (ClockId x = 0; x < ea.clock_count(); ++x) {
        MonitorBuilder b(ea, {req_clock_name(ea, x)});
        LocationId fresh = b.m.add_location("fresh");
        LocationId reqd = b.m.add_location("reqd");
        LocationId viol = b.m.add_location("viol");
        b.m.initial = {fresh};
        ClockId rq = 0;
        auto le1 = ClockConstraint::atom(rq, Rel::Le, 1);
        auto gt1 = ClockConstraint::atom(rq, Rel::Gt, 1);
        for (SymbolId s = 0; s < pairs; ++s) {
            auto al = ea.a_of_pair(s);
            auto bl = ea.b_of_pair(s);
            bool claimed = ea.fregs()[static_cast<std::size_t>(al.freg)].tracks(x);
            bool isreq = bl.requests.contains(x);
            ClockSubset r = b.standard_resets(bl);
            LocationId fresh_next = isreq ? reqd : fresh;
            if (claimed) {
                b.m.add_transition(fresh, s, ClockConstraint::truth(), r, viol);
                b.m.add_transition(reqd, s, le1, r, reqd);
                b.m.add_transition(reqd, s, gt1, r, viol);
            } else {
                b.m.add_transition(fresh, s, ClockConstraint::truth(), r, fresh_next);
                b.m.add_transition(reqd, s, le1, r, viol);
                b.m.add_transition(reqd, s, gt1, r, reqd);
            }
            b.m.add_transition(viol, s, ClockConstraint::truth(), r, viol);
        }
        b.finish_buchi_ok_final(viol);
        out.push_back(std::move(b.m));
    }

    // condition: submitted fractional regions describe the request clocks
    {
        std::vector<std::string> names;
        for (ClockId x = 0; x < ea.clock_count(); ++x) names.push_back(req_clock_name(ea, x));
        MonitorBuilder b(ea, names);
        LocationId ok = b.m.add_location("ok");
        LocationId viol = b.m.add_location("viol");
        b.m.initial = {ok};
        auto frac_zero_guard = [&](ClockId c) {
            return ClockConstraint::atom(c, Rel::Eq, 0) || ClockConstraint::atom(c, Rel::Eq, 1) ||
                   ClockConstraint::atom(c, Rel::Gt, 1);
        };
        auto frac_less_guard = [&](ClockId cx, ClockId cy) {
            // escape above 1, else compare fractional parts of values in [0,1]
            auto esc = ClockConstraint::atom(cx, Rel::Gt, 1) || ClockConstraint::atom(cy, Rel::Gt, 1);
            auto xzero_ypos = ClockConstraint::atom(cx, Rel::Eq, 1) &&
                              ClockConstraint::atom(cy, Rel::Gt, 0) &&
                              ClockConstraint::atom(cy, Rel::Lt, 1);
            auto both_frac = ClockConstraint::atom(cx, Rel::Lt, 1) &&
                             ClockConstraint::atom(cy, Rel::Lt, 1) &&
                             ClockConstraint::diff_atom(cx, cy, Rel::Lt, 0);
            return esc || xzero_ypos || both_frac;
        };
        for (SymbolId s = 0; s < pairs; ++s) {
            auto al = ea.a_of_pair(s);
            auto bl = ea.b_of_pair(s);
            const auto& f = ea.fregs()[static_cast<std::size_t>(al.freg)];
            ClockConstraint cond = ClockConstraint::truth();
            for (ClockId x : f.domain()) {
                ClockConstraint g = frac_zero_guard(x);
                cond = cond && (f.frac_zero(x) ? g : !g);
                for (ClockId y : f.domain()) {
                    if (x == y) continue;
                    ClockConstraint l = frac_less_guard(x, y);
                    cond = cond && (f.frac_less(x, y) ? l : !l);
                }
            }
            ClockSubset r = b.standard_resets(bl);
            b.m.add_transition(ok, s, cond, r, ok);
            b.m.add_transition(ok, s, !cond, r, viol);
            b.m.add_transition(viol, s, ClockConstraint::truth(), r, viol);
        }
        b.finish_buchi_ok_final(viol);
        out.push_back(std::move(b.m));
    }
    return out;
}

std::vector<TimedAutomaton> build_WII_monitors(const EnrichedAlphabet& ea, std::int64_t m_const) {
    if (m_const < 1) throw PreconditionError("request chains need a bound of at least 1");
    std::vector<TimedAutomaton> out;
    int pairs = static_cast<int>(ea.pair_symbols().size());

    // properness parity of the two letter parts
    {
        MonitorBuilder b(ea, {});
        LocationId ok = b.m.add_location("ok");
        LocationId viol = b.m.add_location("viol");
        b.m.initial = {ok};
        for (SymbolId s = 0; s < pairs; ++s) {
            bool pa = !ea.a_is_tick(ea.a_of_pair(s));
            bool pb = !ea.b_is_tick(ea.b_of_pair(s));
            b.m.add_transition(ok, s, ClockConstraint::truth(), ClockSubset::none(),
                               pa == pb ? ok : viol);
            b.m.add_transition(viol, s, ClockConstraint::truth(), ClockSubset::none(), viol);
        }
        b.finish_buchi_ok_final(viol);
        out.push_back(std::move(b.m));
    }

    // improper requests answer expiry information
    {
        MonitorBuilder b(ea, {});
        LocationId ok = b.m.add_location("ok");
        LocationId viol = b.m.add_location("viol");
        b.m.initial = {ok};
        for (SymbolId s = 0; s < pairs; ++s) {
            auto al = ea.a_of_pair(s);
            auto bl = ea.b_of_pair(s);
            bool bad = false;
            if (ea.b_is_tick(bl)) {
                const auto& f = ea.fregs()[static_cast<std::size_t>(al.freg)];
                for (ClockId x = 0; x < ea.clock_count(); ++x)
                    if (bl.requests.contains(x) && !(f.tracks(x) && f.frac_zero(x))) bad = true;
            }
            b.m.add_transition(ok, s, ClockConstraint::truth(), ClockSubset::none(), bad ? viol : ok);
            b.m.add_transition(viol, s, ClockConstraint::truth(), ClockSubset::none(), viol);
        }
        b.finish_buchi_ok_final(viol);
        out.push_back(std::move(b.m));
    }

    // chain counter per clock: improper links exactly one apart, < m
    for (ClockId x = 0; x < ea.clock_count(); ++x) {
        MonitorBuilder b(ea, {req_clock_name(ea, x)});
        std::vector<LocationId> count;
        for (std::int64_t c = 0; c < m_const; ++c)
            count.push_back(b.m.add_location("chain" + std::to_string(c)));
        LocationId viol = b.m.add_location("viol");
        b.m.initial = {count[0]};
        ClockId rq = 0;
        auto eq1 = ClockConstraint::atom(rq, Rel::Eq, 1);
        auto lt1 = ClockConstraint::atom(rq, Rel::Lt, 1);
        auto gt1 = ClockConstraint::atom(rq, Rel::Gt, 1);
        for (SymbolId s = 0; s < pairs; ++s) {
            auto bl = ea.b_of_pair(s);
            bool isreq = bl.requests.contains(x);
            bool improper_req = isreq && ea.b_is_tick(bl);
            ClockSubset r = b.standard_resets(bl);
            for (std::int64_t c = 0; c < m_const; ++c) {
                LocationId cur = count[static_cast<std::size_t>(c)];
                if (!isreq) {
                    b.m.add_transition(cur, s, ClockConstraint::truth(), r, cur);
                } else if (!improper_req) {
                    b.m.add_transition(cur, s, ClockConstraint::truth(), r, count[0]);
                } else if (c == 0) {
                    LocationId nx = (m_const == 1) ? viol : count[1];
                    b.m.add_transition(cur, s, ClockConstraint::truth(), r, nx);
                } else {
                    LocationId ex = (c + 1 >= m_const) ? viol : count[static_cast<std::size_t>(c + 1)];
                    LocationId fresh = (m_const == 1) ? viol : count[1];
                    b.m.add_transition(cur, s, eq1, r, ex);
                    b.m.add_transition(cur, s, lt1, r, fresh);
                    b.m.add_transition(cur, s, gt1, r, fresh);
                }
            }
            b.m.add_transition(viol, s, ClockConstraint::truth(), r, viol);
        }
        b.finish_buchi_ok_final(viol);
        out.push_back(std::move(b.m));
    }
    return out;
}

TimedAutomaton build_chain_guesser(const EnrichedAlphabet& ea, ClockId x) {
    TimedAutomaton g;
    g.alphabet = ea.pair_symbols();
    g.clocks = ClockSet({"chase_" + ea.clocks().name(x)});
    g.mode = AcceptanceMode::Buchi;
    LocationId idle = g.add_location("idle");
    LocationId wait = g.add_location("wait");
    LocationId hit = g.add_location("hit");
    g.initial = {idle};
    g.final = {hit};
    ClockId ch = 0;
    auto eq1 = ClockConstraint::atom(ch, Rel::Eq, 1);
    auto lt1 = ClockConstraint::atom(ch, Rel::Lt, 1);
    for (SymbolId s = 0; s < static_cast<int>(ea.pair_symbols().size()); ++s) {
        auto bl = ea.b_of_pair(s);
        bool isreq = bl.requests.contains(x);
        bool improper_req = isreq && ea.b_is_tick(bl);
        g.add_transition(idle, s, ClockConstraint::truth(), ClockSubset::none(), idle);
        if (improper_req)
            g.add_transition(idle, s, ClockConstraint::truth(), ClockSubset::single(ch), hit);
        for (LocationId from : {wait, hit}) {
            if (!isreq)
                g.add_transition(from, s, lt1, ClockSubset::none(), wait);
            else if (improper_req)
                g.add_transition(from, s, eq1, ClockSubset::single(ch), hit);
        }
    }
    return g;
}

}  // namespace tsyn
