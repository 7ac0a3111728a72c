#include "mground/analysis.hpp"

#include "mground/aggregates.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>

namespace mground {

BodyOccurrences body_occurrences(const BodyLiteral& b) {
    BodyOccurrences occ;
    if (const auto* lit = std::get_if<Literal>(&b)) {
        (lit->negated ? occ.negative : occ.positive).push_back(lit->atom);
    } else if (const auto* agg = std::get_if<Aggregate>(&b)) {
        for (const auto& e : agg->elements) {
            occ.positive.insert(occ.positive.end(), e.condition.begin(), e.condition.end());
        }
        if (classify(*agg) != Monotonicity::Monotone) occ.negative = occ.positive;
    }
    return occ;
}

BodyOccurrences body_occurrences(const Rule& r) {
    BodyOccurrences occ;
    for (const auto& b : r.body) {
        auto part = body_occurrences(b);
        occ.positive.insert(occ.positive.end(), part.positive.begin(), part.positive.end());
        occ.negative.insert(occ.negative.end(), part.negative.begin(), part.negative.end());
    }
    return occ;
}

SafetyError::SafetyError(std::string variable, std::string location, const std::string& rule_text)
    : std::runtime_error("unsafe variable " + variable + " in " + location + " of rule: " + rule_text)
    , variable_(std::move(variable))
    , location_(std::move(location)) {}

namespace {

void unique_append(std::vector<std::string>& out, const std::vector<std::string>& vars) {
    for (const auto& v : vars) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
}

} // namespace

std::vector<std::string> global_variables(const Rule& r) {
    std::vector<std::string> vars;
    r.head.collect_variables(vars);
    for (const auto& b : r.body) {
        if (const auto* lit = std::get_if<Literal>(&b)) {
            lit->atom.collect_variables(vars);
        } else if (const auto* cmp = std::get_if<Comparison>(&b)) {
            cmp->left.collect_variables(vars);
            cmp->right.collect_variables(vars);
        } else {
            std::get<Aggregate>(b).bound.collect_variables(vars);
        }
    }
    std::vector<std::string> out;
    unique_append(out, vars);
    return out;
}

void check_safety(const Rule& r) {
    auto globals = global_variables(r);
    auto is_global = [&](const std::string& v) {
        return std::find(globals.begin(), globals.end(), v) != globals.end();
    };
    std::vector<std::string> bound;
    for (const auto& b : r.body) {
        const auto* lit = std::get_if<Literal>(&b);
        if (lit != nullptr && !lit->negated) lit->atom.collect_variables(bound);
    }
    auto is_bound = [&](const std::string& v) {
        return std::find(bound.begin(), bound.end(), v) != bound.end();
    };
    auto check_globals = [&](const std::vector<std::string>& vars, const std::string& where) {
        for (const auto& v : vars) {
            if (!is_bound(v)) throw SafetyError(v, where, to_string(r));
        }
    };

    std::vector<std::string> vars;
    r.head.collect_variables(vars);
    check_globals(vars, "head");
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        std::string where = "body literal " + std::to_string(i + 1);
        vars.clear();
        if (const auto* lit = std::get_if<Literal>(&r.body[i])) {
            lit->atom.collect_variables(vars);
            check_globals(vars, where);
        } else if (const auto* cmp = std::get_if<Comparison>(&r.body[i])) {
            cmp->left.collect_variables(vars);
            cmp->right.collect_variables(vars);
            check_globals(vars, where);
        } else {
            const auto& agg = std::get<Aggregate>(r.body[i]);
            for (const auto& e : agg.elements) {
                std::vector<std::string> local;
                for (const auto& a : e.condition) a.collect_variables(local);
                std::vector<std::string> occurring;
                for (const auto& t : e.tuple) t.collect_variables(occurring);
                for (const auto& a : e.condition) a.collect_variables(occurring);
                for (const auto& v : occurring) {
                    bool ok = is_global(v) ? is_bound(v)
                                           : std::find(local.begin(), local.end(), v) != local.end();
                    if (!ok) throw SafetyError(v, where, to_string(r));
                }
            }
            agg.bound.collect_variables(vars);
            check_globals(vars, where);
        }
    }
}

void check_safety(const Program& p) {
    for (const auto& r : p.rules) check_safety(r);
}

DependencyGraph build_dependency_graph(const Program& p) {
    std::map<Signature, std::vector<std::size_t>> defined_by;
    for (std::size_t i = 0; i < p.rules.size(); ++i) defined_by[p.rules[i].head.signature()].push_back(i);

    std::set<DependencyEdge> edges;
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        auto occ = body_occurrences(p.rules[i]);
        auto add = [&](const std::vector<Atom>& atoms, Sign sign) {
            for (const auto& a : atoms) {
                auto it = defined_by.find(a.signature());
                if (it == defined_by.end()) continue;
                for (std::size_t j : it->second) edges.insert({i, j, sign});
            }
        };
        add(occ.positive, Sign::Positive);
        add(occ.negative, Sign::Negative);
    }
    return {p.rules.size(), {edges.begin(), edges.end()}};
}

namespace {

// Tarjan's algorithm; returns the component id of every node.
std::vector<std::size_t> scc_ids(std::size_t n, const std::vector<std::vector<std::size_t>>& adj,
                                 std::size_t& count) {
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0;
    count = 0;

    struct Frame {
        std::size_t node;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& f = frames.back();
            if (f.edge < adj[f.node].size()) {
                std::size_t w = adj[f.node][f.edge++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.node] = std::min(low[f.node], index[w]);
                }
                continue;
            }
            std::size_t v = f.node;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[v]);
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                } while (w != v);
                ++count;
            }
        }
    }
    return comp;
}

// Groups `nodes` (a subset of rule indices) into SCCs of the edges accepted by
// `use`, ordered so that dependencies come first; ties go to the component
// with the smallest rule index.
std::vector<std::vector<std::size_t>> ordered_components(const DependencyGraph& g,
                                                         const std::vector<std::size_t>& nodes,
                                                         const std::function<bool(const DependencyEdge&)>& use) {
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = i;
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (const auto& e : g.edges) {
        auto from = local.find(e.from);
        auto to = local.find(e.to);
        if (from == local.end() || to == local.end() || !use(e)) continue;
        adj[from->second].push_back(to->second);
    }
    std::size_t count = 0;
    auto comp = scc_ids(nodes.size(), adj, count);

    std::vector<std::vector<std::size_t>> members(count);
    for (std::size_t i = 0; i < nodes.size(); ++i) members[comp[i]].push_back(nodes[i]);
    for (auto& m : members) std::sort(m.begin(), m.end());

    // Kahn's algorithm over the condensation: a component becomes ready once
    // every component it depends on has been emitted.
    std::vector<std::set<std::size_t>> dependents(count);
    std::vector<std::size_t> pending(count, 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j : adj[i]) {
            if (comp[i] != comp[j] && dependents[comp[j]].insert(comp[i]).second) ++pending[comp[i]];
        }
    }
    using Entry = std::pair<std::size_t, std::size_t>; // (min rule index, component)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
    for (std::size_t c = 0; c < count; ++c) {
        if (pending[c] == 0) ready.push({members[c].front(), c});
    }
    std::vector<std::vector<std::size_t>> out;
    while (!ready.empty()) {
        auto [_, c] = ready.top();
        ready.pop();
        out.push_back(members[c]);
        for (std::size_t d : dependents[c]) {
            if (--pending[d] == 0) ready.push({members[d].front(), d});
        }
    }
    return out;
}

void compute_external(const Program& p, ComponentSequence& s) {
    PredicateSet later;
    for (std::size_t i = s.components.size(); i-- > 0;) {
        auto& c = s.components[i];
        auto heads = head_predicates(p, c.rules);
        later.insert(heads.begin(), heads.end());
        c.external.clear();
        for (const auto& sig : negative_predicates(p, c.rules)) {
            if (later.count(sig) != 0) c.external.insert(sig);
        }
    }
}

} // namespace

PredicateSet negative_predicates(const Program& p, const std::vector<std::size_t>& rules) {
    PredicateSet out;
    for (std::size_t r : rules) {
        for (const auto& a : body_occurrences(p.rules[r]).negative) out.insert(a.signature());
    }
    return out;
}

PredicateSet head_predicates(const Program& p, const std::vector<std::size_t>& rules) {
    PredicateSet out;
    for (std::size_t r : rules) out.insert(p.rules[r].head.signature());
    return out;
}

ComponentSequence instantiation_sequence(const Program& p) {
    auto g = build_dependency_graph(p);
    std::vector<std::size_t> all(p.rules.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    auto groups = ordered_components(g, all, [](const DependencyEdge&) { return true; });

    ComponentSequence s;
    std::vector<std::size_t> component_of(p.rules.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t r : groups[i]) component_of[r] = i;
        Component c;
        c.rules = groups[i];
        c.outer = i;
        s.components.push_back(std::move(c));
    }
    // Dependencies precede dependents, so one forward pass settles the flags.
    std::vector<std::vector<const DependencyEdge*>> outgoing(groups.size());
    for (const auto& e : g.edges) outgoing[component_of[e.from]].push_back(&e);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (const auto* e : outgoing[i]) {
            std::size_t target = component_of[e->to];
            if (target == i ? e->sign == Sign::Negative : !s.components[target].stratified) {
                s.components[i].stratified = false;
                break;
            }
        }
    }
    compute_external(p, s);
    return s;
}

ComponentSequence refine_sequence(const Program& p, const ComponentSequence& s) {
    auto g = build_dependency_graph(p);
    ComponentSequence out;
    for (const auto& c : s.components) {
        auto parts = ordered_components(g, c.rules, [](const DependencyEdge& e) { return e.sign == Sign::Positive; });
        for (std::size_t j = 0; j < parts.size(); ++j) {
            Component sub;
            sub.rules = std::move(parts[j]);
            sub.stratified = c.stratified;
            sub.outer = c.outer;
            sub.inner = j;
            out.components.push_back(std::move(sub));
        }
    }
    compute_external(p, out);
    return out;
}

std::string to_string(const Signature& s) { return s.name + "/" + std::to_string(s.arity); }

} // namespace mground
