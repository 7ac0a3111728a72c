#include "mground/grounder.hpp"
#include "mground/oracle.hpp"
#include "mground/parser.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

using namespace mground;

namespace {

enum Exit : int { Ok = 0, InputError = 1, Budget = 2 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string join_predicates(const PredicateSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& sig : s) {
        if (!first) out += ",";
        out += to_string(sig);
        first = false;
    }
    return out + "}";
}

std::string rule_list(const std::vector<std::size_t>& rules) {
    std::string out = "{";
    for (std::size_t k = 0; k < rules.size(); ++k) {
        if (k != 0) out += ",";
        out += "r" + std::to_string(rules[k] + 1);
    }
    return out + "}";
}

// One line per component of the plain sequence, listing its refined parts.
void print_components(const Program& p, std::ostream& out) {
    auto plain = instantiation_sequence(p);
    auto refined = refine_sequence(p, plain);
    for (std::size_t c = 0; c < plain.components.size(); ++c) {
        const auto& comp = plain.components[c];
        out << "% component " << c + 1 << (comp.stratified ? " stratified" : " unstratified") << " rules "
            << rule_list(comp.rules) << " E=" << join_predicates(comp.external) << " refined";
        for (const auto& part : refined.components) {
            if (part.outer != c) continue;
            out << " " << c + 1 << "." << part.inner + 1 << ":" << rule_list(part.rules)
                << " E=" << join_predicates(part.external);
        }
        out << "\n";
    }
}

void print_trace(const GroundProgramOut& g, std::ostream& err) {
    for (const auto& step : g.trace) {
        std::string name = std::to_string(step.component.outer + 1) + "." + std::to_string(step.component.inner + 1);
        err << "component " << name << " rules " << rule_list(step.component.rules) << " iterations "
            << step.iterations << "\n";
        err << "  I = " << to_string(step.certain, *g.atoms) << "\n";
        err << "  J = " << to_string(step.possible, *g.atoms) << "\n";
    }
    err << "model I = " << to_string(g.model.certain, *g.atoms) << "\n";
    err << "model J = " << to_string(g.model.possible, *g.atoms) << "\n";
}

int run_ground(const std::string& file, bool trace, bool components, bool simplify_output, bool exact,
               std::optional<std::size_t> max_steps) {
    Program p = parse_program(read_file(file));
    check_safety(p);
    if (components) print_components(p, std::cout);
    GrounderOptions opts;
    if (exact) opts.eval.subset_sum_cap = std::numeric_limits<std::size_t>::max();
    opts.max_steps = max_steps;
    auto out = ground_program(p, opts);
    if (trace) print_trace(out, std::cerr);
    GroundProgram rules = out.rules;
    if (simplify_output) rules = strip_certain(rules, out.model, opts.eval);
    std::cout << render(facts_first(rules), *out.atoms);
    return Ok;
}

int run_oracle(const std::string& file, bool foid, std::size_t max_atoms) {
    Program p = parse_program(read_file(file));
    check_safety(p);
    AtomTable atoms;
    auto g = naive_ground(p, program_universe(p), atoms);
    auto wf = wf_oracle(g);
    std::cout << "% well-founded I = " << to_string(wf.certain, atoms) << "\n";
    std::cout << "% well-founded J = " << to_string(wf.possible, atoms) << "\n";
    auto models = foid ? enumerate_foid_stable(g, max_atoms) : enumerate_stable(g, max_atoms);
    for (std::size_t k = 0; k < models.size(); ++k) {
        std::cout << "% model " << k + 1 << " " << to_string(models[k], atoms) << "\n";
    }
    std::cout << "% " << models.size() << (foid ? " FOID-stable" : " stable") << " model(s)\n";
    return Ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grounder for logic programs with aggregates"};
    std::string file;
    bool trace = false;
    bool components = false;
    bool simplify_output = false;
    bool exact = false;
    std::optional<std::size_t> max_steps;
    app.add_option("file", file, "Input program")->check(CLI::ExistingFile);
    app.add_flag("--trace", trace, "Print the certain and possible atoms of every component to stderr");
    app.add_flag("--print-components", components, "Print the instantiation sequence as comments");
    app.add_flag("--simplify", simplify_output, "Drop body literals that are certainly true");
    app.add_flag("--exact-agg", exact, "Decide = and != aggregates exactly regardless of size");
    app.add_option("--max-steps", max_steps, "Bound on rule instantiation calls");

    auto* oracle = app.add_subcommand("oracle", "Brute-force semantics of a small program");
    std::string oracle_file;
    bool foid = false;
    std::size_t max_atoms = 20;
    oracle->add_option("file", oracle_file, "Input program")->required()->check(CLI::ExistingFile);
    oracle->add_flag("--foid", foid, "Enumerate FOID-stable models instead of stable models");
    oracle->add_option("--max-atoms", max_atoms, "Largest number of head atoms to enumerate over");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return InputError;
    }

    try {
        if (oracle->parsed()) return run_oracle(oracle_file, foid, max_atoms);
        if (file.empty()) {
            std::cerr << "error: no input file\n" << app.help();
            return InputError;
        }
        return run_ground(file, trace, components, simplify_output, exact, max_steps);
    } catch (const ParseError& e) {
        std::cerr << (oracle->parsed() ? oracle_file : file) << ":" << e.what() << "\n";
        return InputError;
    } catch (const SafetyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return InputError;
    } catch (const BudgetExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Budget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return InputError;
    }
}
