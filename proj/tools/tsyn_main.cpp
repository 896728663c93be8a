// Command-line front end: membership queries, separability and synthesis
// decisions, controller simulation, fixture generation, DOT export.
//
// Exit codes: 0 positive verdict, 1 negative verdict, 2 input error,
// 3 resource cap exceeded.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tsyn/dot.hpp"
#include "tsyn/errors.hpp"
#include "tsyn/fixtures.hpp"
#include "tsyn/json_io.hpp"
#include "tsyn/separability.hpp"
#include "tsyn/synthesis.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tsyn::DomainError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw tsyn::DomainError("cannot write " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"timed games, synthesis, and deterministic separability"};
    app.require_subcommand(1);

    std::size_t cap = 200000;
    unsigned seed = 1;
    app.add_option("--cap", cap, "state cap for determinization and region graphs");
    app.add_option("--seed", seed, "seed for randomized diagnostics");

    // member
    auto* member = app.add_subcommand("member", "finite-word membership");
    std::string member_aut, member_word;
    member->add_option("automaton", member_aut)->required();
    member->add_option("word", member_word)->required();

    // separate
    auto* separate = app.add_subcommand("separate", "deterministic separability");
    std::string sep_a, sep_b, sep_out;
    int sep_k = 0;
    std::int64_t sep_m = -1;
    separate->add_option("a", sep_a)->required();
    separate->add_option("b", sep_b)->required();
    separate->add_option("-k", sep_k, "separator clock budget")->required();
    separate->add_option("-m", sep_m, "separator constant bound (omit to derive)");
    separate->add_option("-o", sep_out, "separator output path");

    // synth
    auto* synth = app.add_subcommand("synth", "timed controller synthesis");
    std::string synth_game, synth_out;
    int synth_k = 0;
    std::int64_t synth_m = -1;
    synth->add_option("game", synth_game)->required();
    synth->add_option("-k", synth_k, "controller clock budget")->required();
    synth->add_option("-m", synth_m, "controller constant bound (omit to derive)");
    synth->add_option("-o", synth_out, "controller output path");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a controller on a move sequence");
    std::string sim_controller, sim_word, sim_out;
    simulate->add_option("controller", sim_controller)->required();
    simulate->add_option("moves", sim_word)->required();
    simulate->add_option("-o", sim_out, "run output path");

    // fixtures
    auto* fixtures = app.add_subcommand("fixtures", "write a named fixture document");
    std::string fix_name, fix_out;
    int fix_k = 1;
    fixtures->add_option("name", fix_name)->required();
    fixtures->add_option("-k", fix_k, "width parameter for example-Lk");
    fixtures->add_option("-o", fix_out, "output path");

    // dot
    auto* dot = app.add_subcommand("dot", "DOT export of a document");
    std::string dot_in, dot_out;
    dot->add_option("document", dot_in)->required();
    dot->add_option("-o", dot_out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    tsyn::SynthesisOptions opts;
    opts.determinization_cap = cap;
    opts.region_cap = std::max<std::size_t>(cap, 10 * cap);

    try {
        if (*member) {
            tsyn::TimedAutomaton a = tsyn::json_io::parse_automaton(slurp(member_aut));
            tsyn::TimedWord w = tsyn::parse_timed_word(member_word);
            bool in = tsyn::accepts_finite(a, w);
            std::cout << (in ? "accept" : "reject") << "\n";
            return in ? kExitYes : kExitNo;
        }
        if (*separate) {
            tsyn::TimedAutomaton a = tsyn::json_io::parse_automaton(slurp(sep_a));
            tsyn::TimedAutomaton b = tsyn::json_io::parse_automaton(slurp(sep_b));
            tsyn::SeparatorResult res = sep_m >= 0
                                            ? tsyn::decide_km_separability(a, b, sep_k, sep_m, opts)
                                            : tsyn::decide_k_separability(a, b, sep_k, opts);
            if (!res.separable) {
                std::cout << "not-separable\n";
                return kExitNo;
            }
            std::string base = sep_out.empty() ? "separator.json" : sep_out;
            spill(base, tsyn::json_io::serialize_automaton(*res.separator));
            spill(base + ".report", tsyn::json_io::serialize_report(*res.report));
            std::cout << "separable m=" << res.m << " -> " << base << "\n";
            return kExitYes;
        }
        if (*synth) {
            tsyn::GameSpec g = tsyn::json_io::parse_game(slurp(synth_game));
            std::optional<tsyn::KMController> controller;
            std::int64_t used_m = synth_m;
            if (synth_m >= 0) {
                controller = tsyn::solve_km(g, synth_k, synth_m, opts);
            } else {
                auto sol = tsyn::solve_k(g, synth_k, opts);
                if (sol) {
                    controller = sol->controller;
                    used_m = sol->m;
                }
            }
            if (!controller) {
                std::cout << "no-controller\n";
                return kExitNo;
            }
            std::string base = synth_out.empty() ? "controller.json" : synth_out;
            spill(base, tsyn::json_io::serialize_controller(*controller));
            std::cout << "controller m=" << used_m << " -> " << base << "\n";
            return kExitYes;
        }
        if (*simulate) {
            tsyn::KMController m = tsyn::json_io::parse_controller(slurp(sim_controller));
            tsyn::TimedWord w = tsyn::parse_timed_word(sim_word);
            std::vector<tsyn::TimedLetter> moves(w.letters().begin(), w.letters().end());
            tsyn::ConformRun run = tsyn::simulate_controller(m, moves);
            spill(sim_out, tsyn::json_io::serialize_run(run));
            return kExitYes;
        }
        if (*fixtures) {
            std::string text;
            if (fix_name == "example-L")
                text = tsyn::json_io::serialize_automaton(tsyn::fixture_example_L());
            else if (fix_name == "example-L-complement")
                text = tsyn::json_io::serialize_automaton(tsyn::fixture_example_L_complement());
            else if (fix_name == "example-Lk")
                text = tsyn::json_io::serialize_automaton(tsyn::fixture_example_Lk(fix_k));
            else if (fix_name == "points-a")
                text = tsyn::json_io::serialize_automaton(tsyn::fixture_point_a());
            else if (fix_name == "points-b")
                text = tsyn::json_io::serialize_automaton(tsyn::fixture_point_b());
            else if (fix_name == "points") {
                // both point languages in one document
                text = "{\n\"a\": " + tsyn::json_io::serialize_automaton(tsyn::fixture_point_a()) +
                       ",\n\"b\": " + tsyn::json_io::serialize_automaton(tsyn::fixture_point_b()) +
                       "}\n";
            } else if (fix_name == "deadline-game")
                text = tsyn::json_io::serialize_game(tsyn::fixture_deadline_game());
            else {
                std::cerr << "unknown fixture: " << fix_name << "\n";
                return kExitInput;
            }
            spill(fix_out, text);
            return kExitYes;
        }
        if (*dot) {
            std::string text = slurp(dot_in);
            // try the document kinds in order
            try {
                spill(dot_out, tsyn::to_dot(tsyn::json_io::parse_automaton(text)));
                return kExitYes;
            } catch (const tsyn::Error&) {
            }
            try {
                spill(dot_out, tsyn::to_dot(tsyn::json_io::parse_game(text).condition));
                return kExitYes;
            } catch (const tsyn::Error&) {
            }
            spill(dot_out, tsyn::to_dot(tsyn::json_io::parse_controller(text)));
            return kExitYes;
        }
    } catch (const tsyn::ResourceError& e) {
        std::cerr << "resource: " << e.what() << "\n";
        return kExitResource;
    } catch (const tsyn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
