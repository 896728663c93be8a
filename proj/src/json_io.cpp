#include "tsyn/json_io.hpp"

#include <json.hpp>

#include "tsyn/errors.hpp"
#include "tsyn/region.hpp"

namespace tsyn::json_io {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json automaton_to_json(const TimedAutomaton& a) {
    a.validate();
    if (a.mode == AcceptanceMode::GenBuchi)
        throw DomainError("generalized acceptance is internal; degeneralize before writing");
    ordered_json j;
    j["alphabet"] = a.alphabet;
    j["clocks"] = a.clocks.names();
    j["locations"] = a.locations;
    ordered_json init = ordered_json::array();
    for (LocationId l : a.initial) init.push_back(a.locations[static_cast<std::size_t>(l)]);
    j["initial"] = init;
    ordered_json fin = ordered_json::array();
    for (LocationId l : a.final) fin.push_back(a.locations[static_cast<std::size_t>(l)]);
    j["final"] = fin;
    j["mode"] = a.mode == AcceptanceMode::Finite ? "finite" : "buchi";
    ordered_json ts = ordered_json::array();
    for (const auto& t : a.transitions) {
        ordered_json tj;
        tj["from"] = a.locations[static_cast<std::size_t>(t.from)];
        tj["label"] = t.label ? a.alphabet[static_cast<std::size_t>(*t.label)] : "eps";
        tj["guard"] = t.guard.str(a.clocks);
        ordered_json rs = ordered_json::array();
        for (ClockId c : t.resets.members(a.clocks.size())) rs.push_back(a.clocks.name(c));
        tj["resets"] = rs;
        tj["to"] = a.locations[static_cast<std::size_t>(t.to)];
        ts.push_back(tj);
    }
    j["transitions"] = ts;
    return j;
}

LocationId location_by_name(const TimedAutomaton& a, const std::string& name) {
    for (LocationId l = 0; l < a.location_count(); ++l)
        if (a.locations[static_cast<std::size_t>(l)] == name) return l;
    throw DomainError("unknown location: " + name);
}

TimedAutomaton automaton_from_json(const ordered_json& j) {
    TimedAutomaton a;
    a.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    a.clocks = ClockSet(j.at("clocks").get<std::vector<std::string>>());
    a.locations = j.at("locations").get<std::vector<std::string>>();
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "finite")
        a.mode = AcceptanceMode::Finite;
    else if (mode == "buchi")
        a.mode = AcceptanceMode::Buchi;
    else
        throw DomainError("unknown acceptance mode: " + mode);
    for (const auto& name : j.at("initial")) a.initial.insert(location_by_name(a, name));
    for (const auto& name : j.at("final")) a.final.insert(location_by_name(a, name));
    for (const auto& tj : j.at("transitions")) {
        std::string label = tj.at("label").get<std::string>();
        std::optional<SymbolId> sym;
        if (label != "eps") sym = a.require_symbol(label);
        ClockSubset resets;
        for (const auto& cn : tj.at("resets")) resets = resets.with(a.clocks.require(cn));
        a.add_transition(location_by_name(a, tj.at("from").get<std::string>()), sym,
                         parse_constraint(tj.at("guard").get<std::string>(), a.clocks), resets,
                         location_by_name(a, tj.at("to").get<std::string>()));
    }
    a.validate();
    return a;
}

}  // namespace

std::string serialize_automaton(const TimedAutomaton& a) { return automaton_to_json(a).dump(2) + "\n"; }

TimedAutomaton parse_automaton(const std::string& text) {
    try {
        return automaton_from_json(ordered_json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad automaton document: ") + e.what(), 0);
    }
}

std::string serialize_game(const GameSpec& g) {
    ordered_json j;
    j["playerI"] = g.player1;
    j["playerII"] = g.player2;
    j["condition"] = automaton_to_json(g.condition);
    return j.dump(2) + "\n";
}

GameSpec parse_game(const std::string& text) {
    try {
        ordered_json j = ordered_json::parse(text);
        GameSpec g;
        g.player1 = j.at("playerI").get<std::vector<std::string>>();
        g.player2 = j.at("playerII").get<std::vector<std::string>>();
        g.condition = automaton_from_json(j.at("condition"));
        g.validate();
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad game document: ") + e.what(), 0);
    }
}

std::string serialize_controller(const KMController& m) {
    m.validate();
    ordered_json j;
    j["playerI"] = m.inputs;
    j["playerII"] = m.outputs;
    j["clocks"] = m.clocks.names();
    j["maxConstant"] = m.max_constant;
    j["memory"] = m.memory_count;
    j["initial"] = m.initial;
    ordered_json rules = ordered_json::array();
    for (int mem = 0; mem < m.memory_count; ++mem) {
        for (std::size_t in = 0; in < m.inputs.size(); ++in) {
            for (std::size_t ri = 0; ri < m.regions.size(); ++ri) {
                auto rule = m.rule(mem, static_cast<int>(in), static_cast<int>(ri));
                ordered_json rj;
                rj["from"] = mem;
                rj["input"] = m.inputs[in];
                rj["guard"] = m.regions[ri].characteristic_constraint().str(m.clocks);
                rj["to"] = rule.next;
                rj["output"] = m.outputs[static_cast<std::size_t>(rule.output)];
                ordered_json rs = ordered_json::array();
                for (ClockId c : rule.resets.members(m.clocks.size())) rs.push_back(m.clocks.name(c));
                rj["resets"] = rs;
                rules.push_back(rj);
            }
        }
    }
    j["rules"] = rules;
    return j.dump(2) + "\n";
}

KMController parse_controller(const std::string& text) {
    try {
        ordered_json j = ordered_json::parse(text);
        KMController m;
        m.inputs = j.at("playerI").get<std::vector<std::string>>();
        m.outputs = j.at("playerII").get<std::vector<std::string>>();
        m.clocks = ClockSet(j.at("clocks").get<std::vector<std::string>>());
        m.max_constant = j.at("maxConstant").get<std::int64_t>();
        m.memory_count = j.at("memory").get<int>();
        m.initial = j.at("initial").get<int>();
        m.regions = enumerate_regions(m.clocks.size(), m.max_constant);
        m.update.assign(static_cast<std::size_t>(m.memory_count) * m.inputs.size() *
                            m.regions.size(),
                        {-1, -1, ClockSubset::none()});
        for (const auto& rj : j.at("rules")) {
            int mem = rj.at("from").get<int>();
            std::string in = rj.at("input").get<std::string>();
            int in_idx = -1;
            for (std::size_t i = 0; i < m.inputs.size(); ++i)
                if (m.inputs[i] == in) in_idx = static_cast<int>(i);
            if (in_idx < 0) throw DomainError("unknown controller input: " + in);
            ClockConstraint guard = parse_constraint(rj.at("guard").get<std::string>(), m.clocks);
            int region = -1;
            for (std::size_t ri = 0; ri < m.regions.size(); ++ri)
                if (eval_constraint(m.regions[ri].sample(), guard)) {
                    region = static_cast<int>(ri);
                    break;
                }
            if (region < 0) throw DomainError("controller rule guard matches no region");
            std::string out = rj.at("output").get<std::string>();
            int out_idx = -1;
            for (std::size_t i = 0; i < m.outputs.size(); ++i)
                if (m.outputs[i] == out) out_idx = static_cast<int>(i);
            if (out_idx < 0) throw DomainError("unknown controller output: " + out);
            ClockSubset resets;
            for (const auto& cn : rj.at("resets")) resets = resets.with(m.clocks.require(cn));
            m.update[(static_cast<std::size_t>(mem) * m.inputs.size() +
                      static_cast<std::size_t>(in_idx)) *
                         m.regions.size() +
                     static_cast<std::size_t>(region)] = {rj.at("to").get<int>(), out_idx, resets};
        }
        m.validate();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad controller document: ") + e.what(), 0);
    }
}

std::string serialize_report(const SeparatorReport& r) {
    ordered_json j;
    j["inclusion"] = r.inclusion_ok ? "ok" : "fail";
    j["disjointness"] = r.disjointness_ok ? "ok" : "fail";
    if (r.counterexample) j["counterexample"] = r.counterexample->str();
    return j.dump(2) + "\n";
}

std::string serialize_run(const ConformRun& run) {
    ordered_json j;
    j["initialMemory"] = run.initial_memory;
    ordered_json steps = ordered_json::array();
    for (const auto& s : run.steps) {
        ordered_json sj;
        sj["input"] = s.input;
        sj["time"] = s.time.str();
        sj["output"] = s.output;
        sj["memory"] = s.memory;
        ordered_json vals = ordered_json::array();
        for (ClockId c = 0; c < s.valuation.size(); ++c) vals.push_back(s.valuation[c].str());
        sj["clocks"] = vals;
        steps.push_back(sj);
    }
    j["steps"] = steps;
    return j.dump(2) + "\n";
}

}  // namespace tsyn::json_io
