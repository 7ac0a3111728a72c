#include "mground/grounder.hpp"

#include <algorithm>
#include <limits>

namespace mground {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

void collect_aggregate_variables(const Aggregate& a, std::vector<std::string>& out) {
    for (const auto& e : a.elements) {
        for (const auto& t : e.tuple) t.collect_variables(out);
        for (const auto& c : e.condition) c.collect_variables(out);
    }
    a.bound.collect_variables(out);
}

std::vector<Term> as_terms(const std::vector<std::string>& vars) {
    std::vector<Term> out;
    out.reserve(vars.size());
    for (const auto& v : vars) out.push_back(Term::variable(v));
    return out;
}

GlobalKey key_of(const std::vector<std::string>& globals, const Substitution& sigma) {
    GlobalKey key;
    key.reserve(globals.size());
    for (const auto& v : globals) {
        const Term* t = sigma.lookup(v);
        if (t == nullptr) throw std::logic_error("global variable " + v + " left unbound");
        key.push_back(*t);
    }
    return key;
}

Substitution substitution_of(const std::vector<std::string>& globals, const GlobalKey& key) {
    Substitution s;
    for (std::size_t k = 0; k < globals.size(); ++k) s.bind(globals[k], key[k]);
    return s;
}

} // namespace

RewrittenComponent rewrite_aggregates(const Program& p, const std::vector<std::size_t>& rules) {
    RewrittenComponent rc;
    for (std::size_t r : rules) {
        const Rule& rule = p.rules[r];
        auto rule_globals = global_variables(rule);
        std::vector<BodyLiteral> rest;
        for (const auto& b : rule.body) {
            if (!std::holds_alternative<Aggregate>(b)) rest.push_back(b);
        }

        Rule alpha_rule{rule.head, {}};
        std::vector<std::size_t> slots;
        for (std::size_t k = 0; k < rule.body.size(); ++k) {
            const auto* agg = std::get_if<Aggregate>(&rule.body[k]);
            if (agg == nullptr) {
                alpha_rule.body.push_back(rule.body[k]);
                slots.push_back(npos);
                continue;
            }
            AggregateOccurrence occ;
            occ.rule = r;
            occ.literal = k;
            occ.aggregate = *agg;
            std::vector<std::string> vars;
            collect_aggregate_variables(*agg, vars);
            for (const auto& v : vars) {
                bool global = std::find(rule_globals.begin(), rule_globals.end(), v) != rule_globals.end();
                if (global && std::find(occ.globals.begin(), occ.globals.end(), v) == occ.globals.end()) {
                    occ.globals.push_back(v);
                }
            }
            std::string suffix = std::to_string(r) + "_" + std::to_string(k);
            occ.alpha = "__alpha_" + suffix;
            occ.eta = "__eta_" + suffix;
            const std::size_t index = rc.occurrences.size();
            const auto globals = as_terms(occ.globals);

            Rule eta{Atom{occ.eta, globals}, {Comparison{Term::integer(0), agg->rel, agg->bound}}};
            eta.body.insert(eta.body.end(), rest.begin(), rest.end());
            rc.eta_rules.push_back(std::move(eta));
            rc.eta_owner.push_back(index);

            for (std::size_t e = 0; e < agg->elements.size(); ++e) {
                const auto& element = agg->elements[e];
                occ.eps.push_back("__eps_" + suffix + "_" + std::to_string(e));
                Atom head{occ.eps.back(), element.tuple};
                head.args.insert(head.args.end(), globals.begin(), globals.end());
                Rule eps{std::move(head), {}};
                for (const auto& c : element.condition) eps.body.push_back(Literal{c, false});
                eps.body.insert(eps.body.end(), rest.begin(), rest.end());
                rc.eps_rules.push_back(std::move(eps));
                rc.eps_owner.emplace_back(index, e);
            }

            alpha_rule.body.push_back(Literal{Atom{occ.alpha, globals}, false});
            slots.push_back(index);
            rc.occurrences.push_back(std::move(occ));
        }
        rc.alpha_rules.push_back(std::move(alpha_rule));
        rc.alpha_source.push_back(r);
        rc.alpha_slots.push_back(std::move(slots));
    }
    return rc;
}

void AuxiliaryInstances::add_eta(std::size_t occurrence, GlobalKey key) { eta_.emplace(occurrence, std::move(key)); }

void AuxiliaryInstances::add_element(std::size_t occurrence, GlobalKey key, GroundElement element) {
    elements_[{occurrence, std::move(key)}].insert(std::move(element));
}

bool AuxiliaryInstances::aggr_empty(std::size_t occurrence, const GlobalKey& key) const {
    return eta_.count({occurrence, key}) != 0;
}

std::vector<GroundElement> AuxiliaryInstances::aggr_elem(std::size_t occurrence, const GlobalKey& key) const {
    auto it = elements_.find({occurrence, key});
    if (it == elements_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::set<GlobalKey> AuxiliaryInstances::keys(std::size_t occurrence) const {
    std::set<GlobalKey> out;
    for (auto it = eta_.lower_bound({occurrence, {}}); it != eta_.end() && it->first == occurrence; ++it) {
        out.insert(it->second);
    }
    for (auto it = elements_.lower_bound({occurrence, {}}); it != elements_.end() && it->first.first == occurrence;
         ++it) {
        out.insert(it->first.second);
    }
    return out;
}

Grounder::Grounder(const Program& p, std::shared_ptr<AtomTable> atoms, GrounderOptions opts)
    : program_(p)
    , atoms_(atoms ? std::move(atoms) : std::make_shared<AtomTable>())
    , opts_(opts) {}

std::vector<GroundInstance> Grounder::instantiate(const Rule& r, const AtomSet& i, const AtomSet& j,
                                                  const AtomSet& previous, bool first, const GroundRuleOptions& opts) {
    if (opts_.max_steps && steps_ >= *opts_.max_steps) {
        throw BudgetExhausted("step budget of " + std::to_string(*opts_.max_steps) + " rule instantiations exhausted");
    }
    ++steps_;
    return ground_rule(r, *atoms_, i, j, previous, first, opts);
}

AtomSet Grounder::propagate(const RewrittenComponent& rc, const AuxiliaryInstances& aux, const AtomSet& i,
                            const AtomSet& j) {
    AtomSet out;
    for (std::size_t o = 0; o < rc.occurrences.size(); ++o) {
        const auto& occ = rc.occurrences[o];
        for (const auto& key : aux.keys(o)) {
            auto elements = aux.aggr_elem(o, key);
            if (elements.empty() && !aux.aggr_empty(o, key)) continue;
            GroundAggregate ga{occ.aggregate.func, occ.aggregate.rel,
                               substitution_of(occ.globals, key).apply(occ.aggregate.bound), std::move(elements)};
            if (propagate_check(ga, i, j, PropagationMode::Possible, opts_.eval)) {
                out.insert(atoms_->intern(Atom{occ.alpha, key}));
            }
        }
    }
    return out;
}

GroundProgram Grounder::assemble(const RewrittenComponent& rc,
                                 const std::vector<std::pair<std::size_t, GroundInstance>>& alpha,
                                 const AuxiliaryInstances& aux) {
    GroundProgram out;
    out.reserve(alpha.size());
    for (const auto& [k, inst] : alpha) {
        GroundRule g{inst.head, {}};
        for (std::size_t pos = 0; pos < inst.body.size(); ++pos) {
            const auto& lit = inst.body[pos];
            std::size_t slot = rc.alpha_slots[k][pos];
            if (slot != npos) {
                const auto& occ = rc.occurrences[slot];
                const GlobalKey& key = atoms_->atom(lit.atom).args;
                g.body.push_back(Formula::aggregate(GroundAggregate{occ.aggregate.func, occ.aggregate.rel,
                                                                    substitution_of(occ.globals, key).apply(occ.aggregate.bound),
                                                                    aux.aggr_elem(slot, key)}));
                continue;
            }
            switch (lit.kind) {
            case GroundLiteral::Kind::Comparison: g.body.push_back(Formula::top()); break;
            case GroundLiteral::Kind::Positive: g.body.push_back(Formula::atom(lit.atom)); break;
            case GroundLiteral::Kind::Negative: g.body.push_back(Formula::negation(Formula::atom(lit.atom))); break;
            }
        }
        out.push_back(std::move(g));
    }
    return out;
}

GroundProgram Grounder::ground_component(const std::vector<std::size_t>& rules, const AtomSet& ir, const AtomSet& jr,
                                         std::size_t* iterations) {
    auto rc = rewrite_aggregates(program_, rules);
    GroundRuleOptions gopts;
    gopts.recursive = head_predicates(program_, rules);
    for (const auto& occ : rc.occurrences) gopts.recursive.insert(Signature{occ.alpha, occ.globals.size()});
    gopts.delta = true;

    AuxiliaryInstances aux;
    std::vector<std::pair<std::size_t, GroundInstance>> alpha;
    AtomSet j = jr;
    AtomSet previous;
    AtomSet alpha_previous;
    bool first = true;
    std::size_t rounds = 0;
    for (;;) {
        ++rounds;
        for (std::size_t k = 0; k < rc.eta_rules.size(); ++k) {
            const auto& occ = rc.occurrences[rc.eta_owner[k]];
            for (auto& inst : instantiate(rc.eta_rules[k], ir, j, previous, first, gopts)) {
                aux.add_eta(rc.eta_owner[k], key_of(occ.globals, inst.sigma));
            }
        }
        // Element conditions may occur negatively in the reduct, which reads
        // them from ir, so elements are gathered over ir as well. This only
        // matters for the certain pass, where ir is not contained in j.
        AtomSet element_context = j | ir;
        AtomSet element_previous = previous | ir;
        for (std::size_t k = 0; k < rc.eps_rules.size(); ++k) {
            auto [o, e] = rc.eps_owner[k];
            const auto& occ = rc.occurrences[o];
            const auto& element = occ.aggregate.elements[e];
            for (auto& inst : instantiate(rc.eps_rules[k], ir, element_context, element_previous, first, gopts)) {
                GroundElement ge;
                for (const auto& t : element.tuple) ge.tuple.push_back(inst.sigma.apply(t));
                for (std::size_t c = 0; c < element.condition.size(); ++c) ge.condition.push_back(inst.body[c].atom);
                aux.add_element(o, key_of(occ.globals, inst.sigma), std::move(ge));
            }
        }
        AtomSet alpha_atoms = propagate(rc, aux, ir, j);
        AtomSet extended = j | alpha_atoms;
        AtomSet extended_previous = previous | alpha_previous;
        AtomSet derived;
        for (std::size_t k = 0; k < rc.alpha_rules.size(); ++k) {
            for (auto& inst : instantiate(rc.alpha_rules[k], ir, extended, extended_previous, first, gopts)) {
                derived.insert(inst.head);
                alpha.emplace_back(k, std::move(inst));
            }
        }
        first = false;
        alpha_previous = std::move(alpha_atoms);
        previous = j;
        j.insert_all(derived);
        if (previous == j) break;
    }
    if (iterations != nullptr) *iterations = rounds;
    return assemble(rc, alpha, aux);
}

GroundProgramOut Grounder::ground_program() {
    check_safety(program_);
    auto seq = instantiation_sequence(program_);
    if (opts_.refine) seq = refine_sequence(program_, seq);

    GroundProgramOut out;
    out.atoms = atoms_;
    AtomSet certain;
    AtomSet possible;
    std::set<std::string> seen;
    for (const auto& comp : seq.components) {
        std::vector<std::size_t> pruned;
        for (std::size_t r : comp.rules) {
            auto neg = negative_predicates(program_, {r});
            bool clash = std::any_of(neg.begin(), neg.end(), [&](const Signature& s) { return comp.external.count(s) != 0; });
            if (!clash) pruned.push_back(r);
        }
        ComponentTrace step;
        step.component = comp;
        step.certain = heads(ground_component(pruned, possible, certain));
        certain.insert_all(step.certain);
        auto rules = ground_component(comp.rules, certain, possible, &step.iterations);
        step.possible = heads(rules);
        possible.insert_all(step.possible);
        for (auto& r : rules) {
            if (seen.insert(to_string(r, *atoms_)).second) out.rules.push_back(std::move(r));
        }
        out.trace.push_back(std::move(step));
    }
    out.model = {certain, possible};
    return out;
}

GroundProgramOut ground_program(const Program& p, const GrounderOptions& opts, std::shared_ptr<AtomTable> atoms) {
    return Grounder(p, std::move(atoms), opts).ground_program();
}

GroundProgram facts_first(const GroundProgram& g) {
    GroundProgram out = g;
    std::stable_partition(out.begin(), out.end(), [](const GroundRule& r) {
        return std::all_of(r.body.begin(), r.body.end(),
                           [](const Formula& f) { return f.kind() == Formula::Kind::True; });
    });
    return out;
}

} // namespace mground
