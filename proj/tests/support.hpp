// Shared helpers for the test binaries: atom-set conversion across tables,
// oracle pipelines and a generator of small random programs.
#pragma once

#include "mground/grounder.hpp"
#include "mground/oracle.hpp"
#include "mground/parser.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace mground::testing {

using Names = std::set<std::string>;

inline Names names(const AtomSet& s, const AtomTable& atoms) {
    Names out;
    for (AtomId a : s) out.insert(to_string(atoms.atom(a)));
    return out;
}

inline std::set<Names> names(const std::vector<AtomSet>& models, const AtomTable& atoms) {
    std::set<Names> out;
    for (const auto& m : models) out.insert(names(m, atoms));
    return out;
}

inline bool subset(const Names& a, const Names& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

struct NamedInterp {
    Names certain;
    Names possible;
};

inline NamedInterp names(const Interp4& m, const AtomTable& atoms) {
    return {names(m.certain, atoms), names(m.possible, atoms)};
}

inline bool less_precise(const NamedInterp& a, const NamedInterp& b) {
    return subset(a.certain, b.certain) && subset(b.possible, a.possible);
}

// Drops rules with a top-level positive body atom that heads no rule, until
// nothing changes. Such rules can never fire, so stable models are unchanged.
inline GroundProgram prune_underivable(GroundProgram g) {
    for (bool changed = true; changed;) {
        changed = false;
        AtomSet hs = heads(g);
        GroundProgram kept;
        for (auto& r : g) {
            bool dead = std::any_of(r.body.begin(), r.body.end(), [&](const Formula& f) {
                return f.kind() == Formula::Kind::False ||
                       (f.kind() == Formula::Kind::Atom && !hs.contains(f.atom_id()));
            });
            if (dead) {
                changed = true;
            } else {
                kept.push_back(std::move(r));
            }
        }
        g = std::move(kept);
    }
    return g;
}

inline std::size_t aggregate_instances(const GroundProgram& g) {
    std::size_t most = 0;
    for (const auto& r : g) {
        for (const auto& f : r.body) {
            if (f.kind() == Formula::Kind::Aggregate) most = std::max(most, f.aggregate_value().elements.size());
        }
    }
    return most;
}

// Random safe function-free programs over p/1, q/1, r/1, e/2, s/0 and t/0
// with at most six rules and at most one aggregate of at most four elements.
class ProgramGenerator {
public:
    explicit ProgramGenerator(std::uint64_t seed)
        : rng_(seed) {}

    std::string next() {
        std::vector<std::string> rules;
        constants_.clear();
        std::vector<std::string> pool{"1", "2", "a", "b"};
        std::shuffle(pool.begin(), pool.end(), rng_);
        constants_.assign(pool.begin(), pool.begin() + pick(2, 4));
        int total = pick(3, 6);
        int facts = pick(1, std::min(3, total - 1));
        // Heads are fixed up front so that bodies can refer to them, which
        // makes derivations and negative cycles likely.
        defined_.clear();
        heads_.clear();
        std::vector<std::string> fact_text;
        for (int k = 0; k < facts; ++k) fact_text.push_back(fact());
        for (int k = facts; k < total; ++k) heads_.push_back(head_predicate());
        bool aggregate_used = false;
        for (const auto& f : fact_text) rules.push_back(f);
        std::size_t k = 0;
        if (heads_.size() >= 2 && chance(50)) {
            // A pair of rules blocking each other through negation.
            auto [one, two] = choice_pair();
            rules.push_back(one);
            rules.push_back(two);
            k = 2;
        }
        for (; k < heads_.size(); ++k) rules.push_back(rule(heads_[k], aggregate_used));
        std::shuffle(rules.begin(), rules.end(), rng_);
        std::string out;
        for (const auto& r : rules) out += r + "\n";
        return out;
    }

private:
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(int percent) { return pick(1, 100) <= percent; }
    template <class T>
    const T& choose(const std::vector<T>& xs) { return xs[static_cast<std::size_t>(pick(0, static_cast<int>(xs.size()) - 1))]; }
    const std::string& constant() { return choose(constants_); }

    std::string unary() {
        static const std::vector<std::string> preds{"p", "q", "r"};
        return choose(preds);
    }
    std::string nullary() { return chance(50) ? "s" : "t"; }

    std::string head_predicate() {
        int kind = pick(0, 9);
        if (kind < 7) return unary();
        if (kind < 8) return "e";
        return nullary();
    }

    // A predicate for a body literal, preferring ones that have rules.
    std::string body_predicate() {
        std::vector<std::string> known = defined_;
        known.insert(known.end(), heads_.begin(), heads_.end());
        if (!known.empty() && chance(85)) return choose(known);
        return head_predicate();
    }

    std::string fact() {
        std::string pred = head_predicate();
        defined_.push_back(pred);
        return instance(pred, {}) + ".";
    }

    // An atom over the predicate with arguments drawn from `vars` or constants.
    std::string instance(const std::string& pred, const std::vector<std::string>& vars) {
        auto arg = [&]() -> std::string {
            if (!vars.empty() && chance(75)) return choose(vars);
            return constant();
        };
        if (pred == "s" || pred == "t") return pred;
        if (pred == "e") {
            std::string a = arg();
            return "e(" + a + "," + arg() + ")";
        }
        return pred + "(" + arg() + ")";
    }

    std::string positive_atom(std::vector<std::string>& bound) {
        static const std::vector<std::string> fresh{"X", "Y"};
        std::string pred = body_predicate();
        auto var_or_const = [&]() -> std::string {
            if (chance(80)) {
                std::string v = choose(fresh);
                if (std::find(bound.begin(), bound.end(), v) == bound.end()) bound.push_back(v);
                return v;
            }
            return constant();
        };
        if (pred == "s" || pred == "t") return pred;
        if (pred == "e") {
            std::string a = var_or_const();
            return "e(" + a + "," + var_or_const() + ")";
        }
        return pred + "(" + var_or_const() + ")";
    }

    std::pair<std::string, std::string> choice_pair() {
        if (chance(30)) {
            heads_[0] = "s";
            heads_[1] = "t";
            return {"s :- not t.", "t :- not s."};
        }
        std::string a = unary();
        std::string b = a == "p" ? "q" : (a == "q" ? "r" : "p");
        heads_[0] = a;
        heads_[1] = b;
        std::string domain = chance(50) ? unary() : "e";
        std::string guard = domain == "e" ? "e(X," + constant() + ")" : domain + "(X)";
        return {a + "(X) :- " + guard + ", not " + b + "(X).", b + "(X) :- " + guard + ", not " + a + "(X)."};
    }

    std::string negative_atom(const std::vector<std::string>& bound) {
        return "not " + instance(body_predicate(), bound);
    }

    std::string condition_atom(const std::string& var) {
        std::string pred = body_predicate();
        if (pred == "s" || pred == "t") pred = unary();
        if (pred == "e") return "e(" + var + "," + (chance(50) ? var : constant()) + ")";
        return pred + "(" + var + ")";
    }

    std::string aggregate(const std::vector<std::string>& bound) {
        static const std::vector<std::string> funcs{"#count", "#sum", "#sum+", "#sum-"};
        static const std::vector<std::string> rels{"<", "<=", ">", ">=", "=", "!="};
        static const std::vector<std::string> weights{"-1", "1", "2", "3"};
        std::string out = choose(funcs) + " { ";
        int n = pick(1, 3);
        for (int k = 0; k < n; ++k) {
            if (k != 0) out += "; ";
            std::string global = bound.empty() || chance(50) ? "" : choose(bound);
            int kind = pick(0, 4);
            if (kind == 0) {
                out += choose(weights) + " : " + (chance(50) ? nullary() : instance(body_predicate(), bound));
            } else if (kind == 1 && !global.empty()) {
                out += "W : e(" + global + ",W)";
            } else if (kind == 2) {
                out += "W : " + condition_atom("W") + ", " + condition_atom("W");
            } else if (kind == 3 && !global.empty()) {
                out += "W," + global + " : " + condition_atom("W");
            } else {
                out += "W : " + condition_atom("W");
            }
        }
        out += " } " + choose(rels) + " " + std::to_string(pick(-1, 3));
        return out;
    }

    std::string rule(const std::string& head_pred, bool& aggregate_used) {
        std::vector<std::string> bound;
        std::vector<std::string> body;
        int positives = pick(0, 2);
        for (int k = 0; k < positives; ++k) body.push_back(positive_atom(bound));
        int negatives = pick(0, 2);
        for (int k = 0; k < negatives; ++k) body.push_back(negative_atom(bound));
        if (bound.size() == 2 && chance(30)) body.push_back(chance(50) ? "X != Y" : "X < Y");
        if (!aggregate_used && chance(40)) {
            aggregate_used = true;
            body.push_back(aggregate(bound));
        }
        std::shuffle(body.begin(), body.end(), rng_);
        std::string out = instance(head_pred, bound);
        if (!body.empty()) {
            out += " :- ";
            for (std::size_t k = 0; k < body.size(); ++k) out += (k != 0 ? ", " : "") + body[k];
        }
        return out + ".";
    }

    std::mt19937_64 rng_;
    std::vector<std::string> constants_;
    std::vector<std::string> defined_;
    std::vector<std::string> heads_;
};

// One program of the corpus together with its oracle view.
struct CorpusEntry {
    std::string text;
    Program program;
    AtomTable naive_atoms;
    GroundProgram naive; // pruned naive grounding
};

// Draws programs until one is small enough for brute-force enumeration.
inline bool make_entry(ProgramGenerator& gen, CorpusEntry& out, std::size_t max_heads = 14,
                       std::size_t max_instances = 10) {
    out.text = gen.next();
    out.program = parse_program(out.text);
    out.naive_atoms = AtomTable{};
    try {
        out.naive = prune_underivable(naive_ground(out.program, program_universe(out.program), out.naive_atoms));
    } catch (const OracleLimitError&) {
        return false;
    }
    return heads(out.naive).size() <= max_heads && aggregate_instances(out.naive) <= max_instances;
}

} // namespace mground::testing
