#include "mground/oracle.hpp"

#include "mground/analysis.hpp"
#include "mground/instantiation.hpp"

#include <algorithm>
#include <set>

namespace mground {

namespace {

void add_ground(const Term& t, std::set<Term>& out) {
    if (t.ground()) out.insert(t);
}

void add_ground(const Atom& a, std::set<Term>& out) {
    for (const auto& t : a.args) add_ground(t, out);
}

// Calls `visit` for every assignment of the variables over the universe.
template <class F>
void for_each_assignment(const Substitution& base, const std::vector<std::string>& vars,
                         const std::vector<Term>& universe, F&& visit) {
    if (vars.empty()) {
        visit(base);
        return;
    }
    if (universe.empty()) return;
    std::vector<std::size_t> pos(vars.size(), 0);
    for (;;) {
        Substitution s = base;
        for (std::size_t k = 0; k < vars.size(); ++k) s.bind(vars[k], universe[pos[k]]);
        visit(s);
        std::size_t k = 0;
        while (k < vars.size() && ++pos[k] == universe.size()) pos[k++] = 0;
        if (k == vars.size()) return;
    }
}

std::vector<std::string> unique_vars(std::vector<std::string> vars) {
    std::vector<std::string> out;
    for (auto& v : vars) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    }
    return out;
}

} // namespace

std::vector<Term> program_universe(const Program& p) {
    std::set<Term> terms;
    for (const auto& r : p.rules) {
        add_ground(r.head, terms);
        for (const auto& b : r.body) {
            if (const auto* lit = std::get_if<Literal>(&b)) {
                add_ground(lit->atom, terms);
            } else if (const auto* cmp = std::get_if<Comparison>(&b)) {
                add_ground(cmp->left, terms);
                add_ground(cmp->right, terms);
            } else {
                const auto& agg = std::get<Aggregate>(b);
                for (const auto& e : agg.elements) {
                    for (const auto& t : e.tuple) add_ground(t, terms);
                    for (const auto& a : e.condition) add_ground(a, terms);
                }
                add_ground(agg.bound, terms);
            }
        }
    }
    return {terms.begin(), terms.end()};
}

GroundProgram naive_ground(const Program& p, const std::vector<Term>& universe, AtomTable& atoms,
                           std::size_t max_rules) {
    GroundProgram out;
    for (const auto& r : p.rules) {
        auto globals = global_variables(r);
        for_each_assignment(Substitution{}, globals, universe, [&](const Substitution& sigma) {
            GroundRule g{atoms.intern(sigma.apply(r.head)), {}};
            for (const auto& b : r.body) {
                if (const auto* lit = std::get_if<Literal>(&b)) {
                    Formula a = Formula::atom(atoms.intern(sigma.apply(lit->atom)));
                    g.body.push_back(lit->negated ? Formula::negation(std::move(a)) : std::move(a));
                } else if (const auto* cmp = std::get_if<Comparison>(&b)) {
                    if (!eval_comparison(sigma.apply(*cmp))) return;
                    g.body.push_back(Formula::top());
                } else {
                    const auto& agg = std::get<Aggregate>(b);
                    GroundAggregate ga{agg.func, agg.rel, sigma.apply(agg.bound), {}};
                    for (const auto& e : agg.elements) {
                        std::vector<std::string> vars;
                        for (const auto& t : e.tuple) t.collect_variables(vars);
                        for (const auto& c : e.condition) c.collect_variables(vars);
                        std::vector<std::string> locals;
                        for (auto& v : unique_vars(std::move(vars))) {
                            if (!sigma.binds(v)) locals.push_back(std::move(v));
                        }
                        for_each_assignment(sigma, locals, universe, [&](const Substitution& theta) {
                            GroundElement ge;
                            for (const auto& t : e.tuple) ge.tuple.push_back(theta.apply(t));
                            for (const auto& c : e.condition) ge.condition.push_back(atoms.intern(theta.apply(c)));
                            ga.elements.push_back(std::move(ge));
                        });
                    }
                    g.body.push_back(Formula::aggregate(std::move(ga)));
                }
            }
            if (out.size() >= max_rules) {
                throw OracleLimitError("naive grounding exceeds " + std::to_string(max_rules) + " rules");
            }
            out.push_back(std::move(g));
        });
    }
    return out;
}

Formula translate_ferraris(const GroundAggregate& input, std::size_t limit) {
    GroundAggregate a = input;
    a.normalize();
    const std::size_t n = a.elements.size();
    if (n > limit || n >= 31) {
        throw ExpansionLimitError("aggregate has " + std::to_string(n) + " element instances, limit is " +
                                  std::to_string(limit));
    }
    auto element = [&](std::size_t k) {
        std::vector<Formula> atoms;
        for (AtomId c : a.elements[k].condition) atoms.push_back(Formula::atom(c));
        return Formula::conjunction(std::move(atoms));
    };
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    std::vector<Formula> conjuncts;
    for (std::uint32_t d = 0; d <= full; ++d) {
        std::vector<GroundElement> subset;
        std::vector<Formula> antecedent;
        std::vector<Formula> rest;
        for (std::size_t k = 0; k < n; ++k) {
            if ((d >> k) & 1U) {
                subset.push_back(a.elements[k]);
                antecedent.push_back(element(k));
            } else {
                rest.push_back(element(k));
            }
        }
        if (justifies(subset, a)) continue;
        conjuncts.push_back(Formula::implication(Formula::conjunction(std::move(antecedent)),
                                                 Formula::disjunction(std::move(rest))));
    }
    return Formula::conjunction(std::move(conjuncts));
}

namespace {

Formula expand(const Formula& f, Translation t, std::size_t limit) {
    switch (f.kind()) {
    case Formula::Kind::Aggregate:
        return t == Translation::Bounded ? translate_bounded(f.aggregate_value(), limit)
                                         : translate_ferraris(f.aggregate_value(), limit);
    case Formula::Kind::Not: return Formula::negation(expand(f.children()[0], t, limit));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        std::vector<Formula> children;
        for (const auto& c : f.children()) children.push_back(expand(c, t, limit));
        return f.kind() == Formula::Kind::And ? Formula::conjunction(std::move(children))
                                              : Formula::disjunction(std::move(children));
    }
    case Formula::Kind::Implies:
        return Formula::implication(expand(f.children()[0], t, limit), expand(f.children()[1], t, limit));
    default: return f;
    }
}

} // namespace

GroundProgram expand_aggregates(const GroundProgram& g, Translation t, std::size_t limit) {
    GroundProgram out;
    out.reserve(g.size());
    for (const auto& r : g) {
        GroundRule e{r.head, {}};
        for (const auto& f : r.body) e.body.push_back(expand(f, t, limit));
        out.push_back(std::move(e));
    }
    return out;
}

Formula ferraris_reduct(const Formula& f, const AtomSet& x) {
    if (!holds(f, x)) return Formula::bottom();
    switch (f.kind()) {
    case Formula::Kind::Not: return Formula::top();
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        std::vector<Formula> children;
        for (const auto& c : f.children()) children.push_back(ferraris_reduct(c, x));
        return f.kind() == Formula::Kind::And ? Formula::conjunction(std::move(children))
                                              : Formula::disjunction(std::move(children));
    }
    case Formula::Kind::Implies:
        return Formula::implication(ferraris_reduct(f.children()[0], x), ferraris_reduct(f.children()[1], x));
    case Formula::Kind::Aggregate: throw std::logic_error("aggregates must be expanded before taking the reduct");
    default: return f;
    }
}

Formula foid_reduct(const Formula& f, const AtomSet& i, bool positive) {
    switch (f.kind()) {
    case Formula::Kind::Atom:
        if (positive) return f;
        return i.contains(f.atom_id()) ? Formula::top() : Formula::bottom();
    case Formula::Kind::Not: return Formula::implication(foid_reduct(f.children()[0], i, !positive), Formula::bottom());
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        std::vector<Formula> children;
        for (const auto& c : f.children()) children.push_back(foid_reduct(c, i, positive));
        return f.kind() == Formula::Kind::And ? Formula::conjunction(std::move(children))
                                              : Formula::disjunction(std::move(children));
    }
    case Formula::Kind::Implies:
        return Formula::implication(foid_reduct(f.children()[0], i, !positive), foid_reduct(f.children()[1], i, positive));
    case Formula::Kind::Aggregate: throw std::logic_error("aggregates must be expanded before taking the reduct");
    default: return f;
    }
}

namespace {

bool has_aggregate(const Formula& f) {
    if (f.kind() == Formula::Kind::Aggregate) return true;
    return std::any_of(f.children().begin(), f.children().end(), has_aggregate);
}

GroundProgram expanded(const GroundProgram& g) {
    bool any = std::any_of(g.begin(), g.end(), [](const GroundRule& r) {
        return std::any_of(r.body.begin(), r.body.end(), has_aggregate);
    });
    return any ? expand_aggregates(g) : g;
}

std::vector<AtomId> head_list(const GroundProgram& g, std::size_t max_atoms) {
    auto hs = heads(g).elements();
    if (hs.size() > max_atoms) {
        throw OracleLimitError("enumeration over " + std::to_string(hs.size()) + " atoms exceeds the limit of " +
                               std::to_string(max_atoms));
    }
    return hs;
}

AtomSet from_mask(const std::vector<AtomId>& atoms, std::uint64_t mask) {
    AtomSet x;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if ((mask >> k) & 1U) x.insert(atoms[k]);
    }
    return x;
}

bool is_model(const GroundProgram& g, const AtomSet& x) {
    return std::all_of(g.begin(), g.end(), [&](const GroundRule& r) { return x.contains(r.head) || !holds(r.body, x); });
}

bool is_minimal_model_of_reduct(const GroundProgram& g, const std::vector<AtomId>& atoms, std::uint64_t mask) {
    AtomSet x = from_mask(atoms, mask);
    // Rules with bodies false in x reduce to false bodies and never fire.
    std::vector<std::pair<AtomId, Formula>> reduct;
    for (const auto& r : g) {
        if (!holds(r.body, x)) continue;
        reduct.emplace_back(r.head, ferraris_reduct(Formula::conjunction(r.body), x));
    }
    // Proper submasks in decreasing order.
    for (std::uint64_t y = (mask - 1) & mask;; y = (y - 1) & mask) {
        AtomSet ys = from_mask(atoms, y);
        bool model = std::all_of(reduct.begin(), reduct.end(),
                                 [&](const auto& hr) { return ys.contains(hr.first) || !holds(hr.second, ys); });
        if (model) return false;
        if (y == 0) break;
    }
    return true;
}

} // namespace

AtomSet oracle_stable_operator(const GroundProgram& g, const AtomSet& context, const AtomSet& j) {
    std::vector<std::pair<AtomId, Formula>> positive;
    positive.reserve(g.size());
    for (const auto& r : g) positive.emplace_back(r.head, foid_reduct(Formula::conjunction(r.body), j));
    AtomSet x;
    for (;;) {
        AtomSet input = context | x;
        AtomSet next;
        for (const auto& [h, body] : positive) {
            if (holds(body, input)) next.insert(h);
        }
        if (next == x) return x;
        x = std::move(next);
    }
}

std::vector<AtomSet> enumerate_stable(const GroundProgram& input, std::size_t max_atoms) {
    auto g = expanded(input);
    auto atoms = head_list(g, max_atoms);
    std::vector<AtomSet> out;
    const std::uint64_t limit = std::uint64_t{1} << atoms.size();
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        AtomSet x = from_mask(atoms, mask);
        if (!is_model(g, x)) continue;
        if (mask != 0 && !is_minimal_model_of_reduct(g, atoms, mask)) continue;
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<AtomSet> enumerate_foid_stable(const GroundProgram& input, std::size_t max_atoms) {
    auto g = expanded(input);
    auto atoms = head_list(g, max_atoms);
    std::vector<AtomSet> out;
    const std::uint64_t limit = std::uint64_t{1} << atoms.size();
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        AtomSet x = from_mask(atoms, mask);
        if (oracle_stable_operator(g, {}, x) == x) out.push_back(std::move(x));
    }
    return out;
}

Interp4 wf_oracle(const GroundProgram& input) {
    auto g = expanded(input);
    Interp4 cur{AtomSet{}, program_atoms(g)};
    for (;;) {
        Interp4 next{oracle_stable_operator(g, {}, cur.possible), oracle_stable_operator(g, {}, cur.certain)};
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

} // namespace mground
