#include "tsyn/dot.hpp"

#include <sstream>

namespace tsyn {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string to_dot(const TimedAutomaton& a) {
    std::ostringstream os;
    os << "digraph automaton {\n  rankdir=LR;\n";
    for (LocationId l = 0; l < a.location_count(); ++l) {
        os << "  n" << l << " [label=\"" << escape(a.locations[static_cast<std::size_t>(l)])
           << "\"";
        bool fin = a.final.count(l) > 0;
        if (fin) os << ", shape=doublecircle";
        os << "];\n";
    }
    for (LocationId l : a.initial) os << "  init" << l << " [shape=point]; init" << l << " -> n" << l << ";\n";
    for (const auto& t : a.transitions) {
        std::string label = t.label ? a.alphabet[static_cast<std::size_t>(*t.label)] : "eps";
        std::string guard = t.guard.str(a.clocks);
        std::string resets;
        for (ClockId c : t.resets.members(a.clocks.size())) {
            if (!resets.empty()) resets += ",";
            resets += a.clocks.name(c);
        }
        os << "  n" << t.from << " -> n" << t.to << " [label=\"" << escape(label);
        if (guard != "true") os << "\\n" << escape(guard);
        if (!resets.empty()) os << "\\n{" << escape(resets) << "}";
        os << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string to_dot(const UntimedAutomaton& a) {
    std::ostringstream os;
    os << "digraph automaton {\n  rankdir=LR;\n";
    for (StateId s = 0; s < a.state_count(); ++s) {
        os << "  n" << s << " [label=\"" << escape(a.states[static_cast<std::size_t>(s)]) << "\"";
        if (a.final.count(s)) os << ", shape=doublecircle";
        os << "];\n";
    }
    for (StateId s : a.initial) os << "  init" << s << " [shape=point]; init" << s << " -> n" << s << ";\n";
    for (const auto& t : a.transitions) {
        std::string label = t.label ? a.alphabet[static_cast<std::size_t>(*t.label)] : "eps";
        os << "  n" << t.from << " -> n" << t.to << " [label=\"" << escape(label) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string to_dot(const KMController& m) {
    std::ostringstream os;
    os << "digraph controller {\n  rankdir=LR;\n";
    for (int mem = 0; mem < m.memory_count; ++mem) os << "  n" << mem << " [label=\"" << mem << "\"];\n";
    os << "  init [shape=point]; init -> n" << m.initial << ";\n";
    for (int mem = 0; mem < m.memory_count; ++mem) {
        for (std::size_t in = 0; in < m.inputs.size(); ++in) {
            for (std::size_t ri = 0; ri < m.regions.size(); ++ri) {
                auto rule = m.rule(mem, static_cast<int>(in), static_cast<int>(ri));
                std::string resets;
                for (ClockId c : rule.resets.members(m.clocks.size())) {
                    if (!resets.empty()) resets += ",";
                    resets += m.clocks.name(c);
                }
                os << "  n" << mem << " -> n" << rule.next << " [label=\""
                   << escape(m.inputs[in]) << " / "
                   << escape(m.outputs[static_cast<std::size_t>(rule.output)]) << "\\n"
                   << escape(m.regions[ri].characteristic_constraint().str(m.clocks));
                if (!resets.empty()) os << "\\n{" << escape(resets) << "}";
                os << "\"];\n";
            }
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace tsyn
