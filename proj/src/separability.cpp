#include "tsyn/separability.hpp"

#include <algorithm>

#include "tsyn/errors.hpp"

namespace tsyn {

namespace {

const char* kAcc = "acc";
const char* kRej = "rej";

// 3-state monitor over the composite alphabet: accepts words whose last
// letter carries the given verdict.
TimedAutomaton last_verdict_monitor(const std::vector<std::string>& pair_alphabet,
                                    const std::string& verdict) {
    TimedAutomaton m;
    m.alphabet = pair_alphabet;
    m.clocks = ClockSet(std::vector<std::string>{});
    m.locations = {"none", "last_acc", "last_rej"};
    m.initial = {0};
    m.final = {verdict == kAcc ? 1 : 2};
    for (SymbolId s = 0; s < m.symbol_count(); ++s) {
        auto [a, b] = split_symbol(pair_alphabet[static_cast<std::size_t>(s)]);
        LocationId to = b == kAcc ? 1 : 2;
        for (LocationId from = 0; from < 3; ++from)
            m.add_transition(from, s, ClockConstraint::truth(), ClockSubset::none(), to);
    }
    return m;
}

bool epsilon_member(const TimedAutomaton& a) {
    TimedAutomaton eps_only = a;
    eps_only.mode = AcceptanceMode::Finite;
    eps_only.transitions.clear();
    for (const auto& t : a.transitions)
        if (!t.label) eps_only.transitions.push_back(t);
    return !nta_emptiness(eps_only).empty;
}

}  // namespace

TimedAutomaton build_W0(const TimedAutomaton& a, const TimedAutomaton& b) {
    if (a.alphabet != b.alphabet) throw PreconditionError("separands need a shared alphabet");
    if (a.mode != AcceptanceMode::Finite || b.mode != AcceptanceMode::Finite)
        throw PreconditionError("separability is about finite-word languages");

    std::vector<std::string> verdicts{kAcc, kRej};
    TimedAutomaton lift_a = inverse_projection(a, verdicts);
    TimedAutomaton lift_b = inverse_projection(b, verdicts);
    TimedAutomaton bad_a = product(lift_a, last_verdict_monitor(lift_a.alphabet, kRej));
    TimedAutomaton bad_b = product(lift_b, last_verdict_monitor(lift_b.alphabet, kAcc));
    return suffix_omega(drop_unused_clocks(union_ta(bad_a, bad_b)));
}

TimedAutomaton controller_to_separator(const KMController& m, const TimedAutomaton& a) {
    m.validate();
    if (m.outputs != std::vector<std::string>({kAcc, kRej}) &&
        m.outputs != std::vector<std::string>({kRej, kAcc}))
        throw PreconditionError("controller outputs must be the two verdicts");
    int acc_idx = m.outputs[0] == kAcc ? 0 : 1;

    TimedAutomaton s;
    s.alphabet = m.inputs;
    s.clocks = m.clocks;
    s.mode = AcceptanceMode::Finite;
    auto loc_of = [&](int mem, int verdict_acc) { return mem * 2 + verdict_acc; };
    for (int mem = 0; mem < m.memory_count; ++mem) {
        s.locations.push_back("m" + std::to_string(mem) + "_rej");
        s.locations.push_back("m" + std::to_string(mem) + "_acc");
    }
    s.initial = {loc_of(m.initial, epsilon_member(a) ? 1 : 0)};
    for (int mem = 0; mem < m.memory_count; ++mem) s.final.insert(loc_of(mem, 1));
    for (int mem = 0; mem < m.memory_count; ++mem) {
        for (std::size_t in = 0; in < m.inputs.size(); ++in) {
            for (std::size_t ri = 0; ri < m.regions.size(); ++ri) {
                auto rule = m.rule(mem, static_cast<int>(in), static_cast<int>(ri));
                int verdict_acc = rule.output == acc_idx ? 1 : 0;
                ClockConstraint guard = m.regions[ri].characteristic_constraint();
                for (int from_flag = 0; from_flag < 2; ++from_flag)
                    s.add_transition(loc_of(mem, from_flag), static_cast<SymbolId>(in), guard,
                                     rule.resets, loc_of(rule.next, verdict_acc));
            }
        }
    }
    return s;
}

KMController separator_to_controller(const TimedAutomaton& s_in) {
    if (!is_deterministic(s_in)) throw PreconditionError("separators must be deterministic");
    std::int64_t m = std::max<std::int64_t>(s_in.max_constant(), 0);
    TimedAutomaton s = regionise(s_in, m);

    KMController out;
    out.inputs = s.alphabet;
    out.outputs = {kAcc, kRej};
    out.clocks = s.clocks;
    out.max_constant = m;
    out.regions = enumerate_regions(s.clocks.size(), m);
    out.memory_count = s.location_count();
    out.initial = *s.initial.begin();
    out.update.assign(static_cast<std::size_t>(out.memory_count) * out.inputs.size() *
                          out.regions.size(),
                      {0, 0, ClockSubset::none()});
    for (int mem = 0; mem < out.memory_count; ++mem) {
        for (std::size_t in = 0; in < out.inputs.size(); ++in) {
            for (std::size_t ri = 0; ri < out.regions.size(); ++ri) {
                const TimedTransition* hit = nullptr;
                for (const auto& t : s.transitions) {
                    if (t.from != mem || !t.label ||
                        *t.label != static_cast<SymbolId>(in))
                        continue;
                    if (out.regions[ri].satisfies(t.guard)) {
                        hit = &t;
                        break;
                    }
                }
                if (!hit) throw InternalError("regionised separator is not total");
                int output = s.final.count(hit->to) ? 0 : 1;
                out.update[(static_cast<std::size_t>(mem) * out.inputs.size() + in) *
                               out.regions.size() +
                           ri] = {hit->to, output, hit->resets};
            }
        }
    }
    out.validate();
    return out;
}

SeparatorReport verify_separator(const TimedAutomaton& s, const TimedAutomaton& a,
                                 const TimedAutomaton& b) {
    if (!is_deterministic(s)) throw PreconditionError("separators must be deterministic");
    SeparatorReport report;

    TimedAutomaton not_s = complement_dta(s);
    TimedAutomaton outside = drop_unused_clocks(product(a, not_s));
    auto inc = nta_emptiness(outside);
    report.inclusion_ok = inc.empty;
    if (!inc.empty)
        report.counterexample = instantiate_witness(outside, inc.graph, inc.witness->stem);

    TimedAutomaton overlap = drop_unused_clocks(product(s, b));
    auto dis = nta_emptiness(overlap);
    report.disjointness_ok = dis.empty;
    if (!dis.empty && !report.counterexample)
        report.counterexample = instantiate_witness(overlap, dis.graph, dis.witness->stem);
    return report;
}

SeparatorResult decide_km_separability(const TimedAutomaton& a, const TimedAutomaton& b, int k,
                                       std::int64_t m, const SynthesisOptions& opts) {
    if (a.alphabet != b.alphabet) throw PreconditionError("separands need a shared alphabet");
    GameSpec g;
    g.player1 = a.alphabet;
    g.player2 = {kAcc, kRej};
    g.condition = build_W0(a, b);

    auto controller = solve_km(g, k, m, opts);
    SeparatorResult result;
    result.m = m;
    if (!controller) return result;
    result.separable = true;
    result.separator = controller_to_separator(*controller, a);
    result.report = verify_separator(*result.separator, a, b);
    if (!result.report->ok())
        throw InternalError("separator extracted from a winning controller failed verification");
    return result;
}

SeparatorResult decide_k_separability(const TimedAutomaton& a, const TimedAutomaton& b, int k,
                                      const SynthesisOptions& opts) {
    if (a.alphabet != b.alphabet) throw PreconditionError("separands need a shared alphabet");
    GameSpec g;
    g.player1 = a.alphabet;
    g.player2 = {kAcc, kRej};
    g.condition = build_W0(a, b);

    auto sol = solve_k(g, k, opts);
    SeparatorResult result;
    if (!sol) return result;
    result.separable = true;
    result.m = sol->m;
    result.separator = controller_to_separator(sol->controller, a);
    result.report = verify_separator(*result.separator, a, b);
    if (!result.report->ok())
        throw InternalError("separator extracted from a winning controller failed verification");
    return result;
}

}  // namespace tsyn
