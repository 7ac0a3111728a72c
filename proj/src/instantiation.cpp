#include "mground/instantiation.hpp"

#include <algorithm>
#include <stdexcept>

namespace mground {

const Term* Substitution::lookup(const std::string& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
}

bool Substitution::bind(const std::string& var, const Term& value) {
    auto [it, fresh] = map_.emplace(var, value);
    return fresh || it->second == value;
}

Term Substitution::apply(const Term& t) const {
    if (t.is_variable()) {
        const Term* v = lookup(t.name());
        return v != nullptr ? *v : t;
    }
    if (t.args().empty()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(apply(a));
    return Term::function(t.name(), std::move(args));
}

Atom Substitution::apply(const Atom& a) const {
    Atom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(apply(t));
    return out;
}

Comparison Substitution::apply(const Comparison& c) const { return {apply(c.left), c.rel, apply(c.right)}; }

bool match_into(const Term& pattern, const Term& ground, Substitution& sigma) {
    switch (pattern.kind()) {
    case Term::Kind::Variable: return sigma.bind(pattern.name(), ground);
    case Term::Kind::Function:
        if (ground.kind() != Term::Kind::Function || ground.name() != pattern.name() ||
            ground.args().size() != pattern.args().size()) {
            return false;
        }
        for (std::size_t k = 0; k < pattern.args().size(); ++k) {
            if (!match_into(pattern.args()[k], ground.args()[k], sigma)) return false;
        }
        return true;
    default: return pattern == ground;
    }
}

std::optional<Substitution> match(const Atom& pattern, const Atom& ground) {
    if (pattern.predicate != ground.predicate || pattern.args.size() != ground.args.size()) return std::nullopt;
    Substitution sigma;
    for (std::size_t k = 0; k < pattern.args.size(); ++k) {
        if (!match_into(pattern.args[k], ground.args[k], sigma)) return std::nullopt;
    }
    return sigma;
}

std::vector<Substitution> matches(const BodyLiteral& l, const AtomTable& table, const AtomSet& i, const AtomSet& j,
                                  const Substitution& sigma, MatchScope scope, const AtomSet* previous) {
    std::vector<Substitution> out;
    if (const auto* cmp = std::get_if<Comparison>(&l)) {
        Comparison c = sigma.apply(*cmp);
        if (!c.left.ground() || !c.right.ground()) throw std::logic_error("comparison is not ground");
        if (eval_comparison(c)) out.push_back(sigma);
        return out;
    }
    const auto& lit = std::get<Literal>(l);
    Atom a = sigma.apply(lit.atom);
    if (lit.negated) {
        if (!a.ground()) throw std::logic_error("negative literal is not ground");
        auto id = table.find(a);
        if (!id || !i.contains(*id)) out.push_back(sigma);
        return out;
    }
    for (AtomId id : table.with_signature(a.signature())) {
        if (!j.contains(id)) continue;
        if (scope == MatchScope::Delta && previous != nullptr && previous->contains(id)) continue;
        Substitution extended = sigma;
        const Atom& g = table.atom(id);
        bool ok = true;
        for (std::size_t k = 0; ok && k < a.args.size(); ++k) ok = match_into(a.args[k], g.args[k], extended);
        if (ok) out.push_back(std::move(extended));
    }
    return out;
}

namespace {

bool ground_under(const Term& t, const Substitution& sigma) {
    if (t.is_variable()) return sigma.binds(t.name());
    return std::all_of(t.args().begin(), t.args().end(), [&](const Term& a) { return ground_under(a, sigma); });
}

bool ground_under(const Atom& a, const Substitution& sigma) {
    return std::all_of(a.args.begin(), a.args.end(), [&](const Term& t) { return ground_under(t, sigma); });
}

std::size_t unbound_count(const Atom& a, const Substitution& sigma) {
    std::vector<std::string> vars;
    a.collect_variables(vars);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return static_cast<std::size_t>(
        std::count_if(vars.begin(), vars.end(), [&](const std::string& v) { return !sigma.binds(v); }));
}

} // namespace

std::size_t select(const Substitution& sigma, const std::vector<BodyLiteral>& body,
                   const std::vector<std::size_t>& remaining, const PredicateSet& recursive) {
    for (std::size_t k : remaining) {
        if (const auto* cmp = std::get_if<Comparison>(&body[k])) {
            if (ground_under(cmp->left, sigma) && ground_under(cmp->right, sigma)) return k;
        } else if (const auto& lit = std::get<Literal>(body[k]); lit.negated && ground_under(lit.atom, sigma)) {
            return k;
        }
    }
    for (std::size_t k : remaining) {
        const auto* lit = std::get_if<Literal>(&body[k]);
        if (lit != nullptr && !lit->negated && recursive.count(lit->atom.signature()) != 0) return k;
    }
    std::size_t best = remaining.size();
    std::size_t best_count = 0;
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
        const auto* lit = std::get_if<Literal>(&body[remaining[pos]]);
        if (lit == nullptr || lit->negated) continue;
        std::size_t n = unbound_count(lit->atom, sigma);
        if (best == remaining.size() || n > best_count) {
            best = pos;
            best_count = n;
        }
    }
    if (best == remaining.size()) throw std::logic_error("no literal can be selected; is the rule safe?");
    return remaining[best];
}

std::vector<GroundInstance> ground_rule(const Rule& r, AtomTable& table, const AtomSet& i, const AtomSet& j,
                                        const AtomSet& previous, bool first, const GroundRuleOptions& opts,
                                        const Substitution& sigma) {
    for (const auto& b : r.body) {
        if (std::holds_alternative<Aggregate>(b)) throw std::logic_error("ground_rule expects a normal rule");
    }

    // With the delta optimization, the single positive literal over a
    // recursive predicate only needs atoms that are new since `previous`.
    std::size_t delta_literal = r.body.size();
    if (!first && opts.delta) {
        std::size_t found = 0;
        for (std::size_t k = 0; k < r.body.size(); ++k) {
            const auto* lit = std::get_if<Literal>(&r.body[k]);
            if (lit != nullptr && !lit->negated && opts.recursive.count(lit->atom.signature()) != 0) {
                delta_literal = k;
                ++found;
            }
        }
        if (found != 1) delta_literal = r.body.size();
    }

    struct Frame {
        Substitution sigma;
        std::vector<std::size_t> remaining;
        std::vector<Substitution> candidates;
        std::size_t next = 0;
        bool expanded = false;
    };
    std::vector<Frame> stack;
    Frame root;
    root.sigma = sigma;
    for (std::size_t k = 0; k < r.body.size(); ++k) root.remaining.push_back(k);
    stack.push_back(std::move(root));

    std::vector<GroundInstance> out;
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (!top.expanded) {
            if (top.remaining.empty()) {
                GroundInstance g;
                bool fresh = first;
                for (const auto& b : r.body) {
                    if (std::holds_alternative<Comparison>(b)) {
                        g.body.push_back({GroundLiteral::Kind::Comparison, 0});
                        continue;
                    }
                    const auto& lit = std::get<Literal>(b);
                    AtomId id = table.intern(top.sigma.apply(lit.atom));
                    if (lit.negated) {
                        g.body.push_back({GroundLiteral::Kind::Negative, id});
                    } else {
                        g.body.push_back({GroundLiteral::Kind::Positive, id});
                        fresh = fresh || !previous.contains(id);
                    }
                }
                if (fresh) {
                    g.head = table.intern(top.sigma.apply(r.head));
                    g.sigma = std::move(top.sigma);
                    out.push_back(std::move(g));
                }
                stack.pop_back();
                continue;
            }
            std::size_t k = select(top.sigma, r.body, top.remaining, opts.recursive);
            MatchScope scope = k == delta_literal ? MatchScope::Delta : MatchScope::All;
            top.candidates = matches(r.body[k], table, i, j, top.sigma, scope, &previous);
            top.remaining.erase(std::find(top.remaining.begin(), top.remaining.end(), k));
            top.expanded = true;
        }
        if (top.next == top.candidates.size()) {
            stack.pop_back();
            continue;
        }
        Frame child;
        child.sigma = std::move(top.candidates[top.next++]);
        child.remaining = top.remaining;
        stack.push_back(std::move(child));
    }
    return out;
}

} // namespace mground
