#include "mground/ground.hpp"

#include "mground/aggregates.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>

namespace mground {

AtomId AtomTable::intern(const Atom& atom) {
    auto it = ids_.find(atom);
    if (it != ids_.end()) return it->second;
    auto id = static_cast<AtomId>(atoms_.size());
    atoms_.push_back(atom);
    ids_.emplace(atom, id);
    by_signature_[atom.signature()].push_back(id);
    return id;
}

std::optional<AtomId> AtomTable::find(const Atom& atom) const {
    auto it = ids_.find(atom);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const std::vector<AtomId>& AtomTable::with_signature(const Signature& sig) const {
    static const std::vector<AtomId> none;
    auto it = by_signature_.find(sig);
    return it == by_signature_.end() ? none : it->second;
}

AtomSet::AtomSet(std::initializer_list<AtomId> ids) {
    for (AtomId id : ids) insert(id);
}

bool AtomSet::insert(AtomId id) {
    std::size_t w = id / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    std::uint64_t bit = std::uint64_t{1} << (id % 64);
    bool fresh = (words_[w] & bit) == 0;
    words_[w] |= bit;
    return fresh;
}

void AtomSet::erase(AtomId id) {
    std::size_t w = id / 64;
    if (w < words_.size()) words_[w] &= ~(std::uint64_t{1} << (id % 64));
}

bool AtomSet::insert_all(const AtomSet& other) {
    if (other.words_.size() > words_.size()) words_.resize(other.words_.size(), 0);
    bool grew = false;
    for (std::size_t w = 0; w < other.words_.size(); ++w) {
        std::uint64_t merged = words_[w] | other.words_[w];
        grew = grew || merged != words_[w];
        words_[w] = merged;
    }
    return grew;
}

std::size_t AtomSet::size() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool AtomSet::subset_of(const AtomSet& other) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t theirs = w < other.words_.size() ? other.words_[w] : 0;
        if ((words_[w] & ~theirs) != 0) return false;
    }
    return true;
}

std::vector<AtomId> AtomSet::elements() const { return {begin(), end()}; }

void AtomSet::iterator::settle() {
    std::size_t limit = set_->words_.size() * 64;
    while (pos_ < limit) {
        std::uint64_t rest = set_->words_[pos_ / 64] >> (pos_ % 64);
        if (rest != 0) {
            pos_ += static_cast<std::size_t>(std::countr_zero(rest));
            return;
        }
        pos_ = (pos_ / 64 + 1) * 64;
    }
    pos_ = limit;
}

bool operator==(const AtomSet& a, const AtomSet& b) {
    std::size_t n = std::max(a.words_.size(), b.words_.size());
    for (std::size_t w = 0; w < n; ++w) {
        std::uint64_t x = w < a.words_.size() ? a.words_[w] : 0;
        std::uint64_t y = w < b.words_.size() ? b.words_[w] : 0;
        if (x != y) return false;
    }
    return true;
}

AtomSet operator|(const AtomSet& a, const AtomSet& b) {
    AtomSet out = a;
    out.insert_all(b);
    return out;
}

AtomSet operator&(const AtomSet& a, const AtomSet& b) {
    AtomSet out;
    out.words_.resize(std::min(a.words_.size(), b.words_.size()));
    for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] = a.words_[w] & b.words_[w];
    return out;
}

AtomSet operator-(const AtomSet& a, const AtomSet& b) {
    AtomSet out = a;
    for (std::size_t w = 0; w < std::min(a.words_.size(), b.words_.size()); ++w) out.words_[w] &= ~b.words_[w];
    return out;
}

bool less_precise_or_equal(const Interp4& a, const Interp4& b) {
    return a.certain.subset_of(b.certain) && b.possible.subset_of(a.possible);
}

Interp4 join(const Interp4& a, const Interp4& b) { return {a.certain | b.certain, a.possible | b.possible}; }

void GroundAggregate::normalize() {
    for (auto& e : elements) {
        std::vector<AtomId> kept;
        for (AtomId c : e.condition) {
            if (std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(c);
        }
        e.condition = std::move(kept);
    }
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
}

Formula Formula::atom(AtomId id) {
    Formula f;
    f.kind_ = Kind::Atom;
    f.atom_ = id;
    return f;
}

Formula Formula::top() { return {}; }

Formula Formula::bottom() {
    Formula f;
    f.kind_ = Kind::False;
    return f;
}

Formula Formula::negation(Formula g) {
    Formula f;
    f.kind_ = Kind::Not;
    f.children_.push_back(std::move(g));
    return f;
}

Formula Formula::conjunction(std::vector<Formula> fs) {
    if (fs.empty()) return top();
    if (fs.size() == 1) return std::move(fs.front());
    Formula f;
    f.kind_ = Kind::And;
    f.children_ = std::move(fs);
    return f;
}

Formula Formula::disjunction(std::vector<Formula> fs) {
    if (fs.empty()) return bottom();
    if (fs.size() == 1) return std::move(fs.front());
    Formula f;
    f.kind_ = Kind::Or;
    f.children_ = std::move(fs);
    return f;
}

Formula Formula::implication(Formula antecedent, Formula consequent) {
    Formula f;
    f.kind_ = Kind::Implies;
    f.children_.push_back(std::move(antecedent));
    f.children_.push_back(std::move(consequent));
    return f;
}

Formula Formula::aggregate(GroundAggregate a) {
    Formula f;
    f.kind_ = Kind::Aggregate;
    a.normalize();
    f.aggregate_ = std::make_shared<const GroundAggregate>(std::move(a));
    return f;
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.kind_ != b.kind_ || a.atom_ != b.atom_ || a.children_ != b.children_) return false;
    if (a.kind_ != Formula::Kind::Aggregate) return true;
    return *a.aggregate_ == *b.aggregate_;
}

bool holds(const Formula& f, const AtomSet& x, const EvalOptions& opts) {
    switch (f.kind()) {
    case Formula::Kind::Atom: return x.contains(f.atom_id());
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Not: return !holds(f.children()[0], x, opts);
    case Formula::Kind::And:
        return std::all_of(f.children().begin(), f.children().end(),
                           [&](const Formula& c) { return holds(c, x, opts); });
    case Formula::Kind::Or:
        return std::any_of(f.children().begin(), f.children().end(),
                           [&](const Formula& c) { return holds(c, x, opts); });
    case Formula::Kind::Implies: return !holds(f.children()[0], x, opts) || holds(f.children()[1], x, opts);
    case Formula::Kind::Aggregate:
        return propagate_check(f.aggregate_value(), x, x, PropagationMode::Classical, opts);
    }
    return false;
}

bool holds(const std::vector<Formula>& body, const AtomSet& x, const EvalOptions& opts) {
    return std::all_of(body.begin(), body.end(), [&](const Formula& c) { return holds(c, x, opts); });
}

namespace {

// Truth of the reduct of f under j; `positive` tells whether f itself occurs
// positively. Negative occurrences of atoms read i. Swapping i and j flips
// the polarity, which covers aggregates below a negation.
bool eval_reduct(const Formula& f, const AtomSet& i, const AtomSet& j, bool positive, const EvalOptions& opts) {
    switch (f.kind()) {
    case Formula::Kind::Atom: return (positive ? j : i).contains(f.atom_id());
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Not: return !eval_reduct(f.children()[0], i, j, !positive, opts);
    case Formula::Kind::And:
        return std::all_of(f.children().begin(), f.children().end(),
                           [&](const Formula& c) { return eval_reduct(c, i, j, positive, opts); });
    case Formula::Kind::Or:
        return std::any_of(f.children().begin(), f.children().end(),
                           [&](const Formula& c) { return eval_reduct(c, i, j, positive, opts); });
    case Formula::Kind::Implies:
        return !eval_reduct(f.children()[0], i, j, !positive, opts) ||
               eval_reduct(f.children()[1], i, j, positive, opts);
    case Formula::Kind::Aggregate:
        return positive ? propagate_check(f.aggregate_value(), i, j, PropagationMode::Possible, opts)
                        : propagate_check(f.aggregate_value(), j, i, PropagationMode::Possible, opts);
    }
    return false;
}

} // namespace

bool holds_reduct(const Formula& f, const AtomSet& i, const AtomSet& j, const EvalOptions& opts) {
    return eval_reduct(f, i, j, true, opts);
}

bool holds_reduct(const std::vector<Formula>& body, const AtomSet& i, const AtomSet& j, const EvalOptions& opts) {
    return std::all_of(body.begin(), body.end(), [&](const Formula& c) { return eval_reduct(c, i, j, true, opts); });
}

AtomSet immediate_consequence(const GroundProgram& g, const AtomSet& x, const EvalOptions& opts) {
    AtomSet out;
    for (const auto& r : g) {
        if (holds(r.body, x, opts)) out.insert(r.head);
    }
    return out;
}

AtomSet stable_relative(const GroundProgram& g, const AtomSet& context, const AtomSet& j, const EvalOptions& opts) {
    AtomSet x;
    for (;;) {
        AtomSet input = context | x;
        AtomSet next;
        for (const auto& r : g) {
            if (!next.contains(r.head) && holds_reduct(r.body, j, input, opts)) next.insert(r.head);
        }
        if (next == x) return x;
        x = std::move(next);
    }
}

namespace {

void collect_atoms(const Formula& f, AtomSet& out) {
    switch (f.kind()) {
    case Formula::Kind::Atom: out.insert(f.atom_id()); break;
    case Formula::Kind::Aggregate:
        for (const auto& e : f.aggregate_value().elements) {
            for (AtomId a : e.condition) out.insert(a);
        }
        break;
    default:
        for (const auto& c : f.children()) collect_atoms(c, out);
    }
}

} // namespace

AtomSet program_atoms(const GroundProgram& g) {
    AtomSet out;
    for (const auto& r : g) {
        out.insert(r.head);
        for (const auto& f : r.body) collect_atoms(f, out);
    }
    return out;
}

AtomSet heads(const GroundProgram& g) {
    AtomSet out;
    for (const auto& r : g) out.insert(r.head);
    return out;
}

Interp4 well_founded_model(const GroundProgram& g, const Interp4& context, const EvalOptions& opts,
                           const std::function<void(const Interp4&)>& on_step) {
    Interp4 cur{AtomSet{}, program_atoms(g) | context.certain | context.possible};
    for (;;) {
        Interp4 next{stable_relative(g, context.certain, cur.possible | context.possible, opts),
                     stable_relative(g, context.possible, cur.certain | context.certain, opts)};
        if (on_step) on_step(next);
        if (next == cur) break;
        cur = std::move(next);
    }
    if (!cur.certain.subset_of(cur.possible)) throw std::logic_error("well-founded model is inconsistent");
    return cur;
}

GroundProgram simplify(const GroundProgram& g, const Interp4& model, const EvalOptions& opts) {
    GroundProgram out;
    for (const auto& r : g) {
        if (holds_reduct(r.body, model.certain, model.possible, opts)) out.push_back(r);
    }
    return out;
}

GroundProgram strip_certain(const GroundProgram& g, const Interp4& model, const EvalOptions& opts) {
    GroundProgram out;
    out.reserve(g.size());
    for (const auto& r : g) {
        GroundRule stripped{r.head, {}};
        for (const auto& f : r.body) {
            if (!holds_reduct(f, model.possible, model.certain, opts)) stripped.body.push_back(f);
        }
        out.push_back(std::move(stripped));
    }
    return out;
}

namespace {

std::string join_formulas(const std::vector<Formula>& fs, const AtomTable& atoms, const char* sep) {
    std::string out;
    for (std::size_t k = 0; k < fs.size(); ++k) {
        if (k > 0) out += sep;
        out += to_string(fs[k], atoms);
    }
    return out;
}

} // namespace

std::string to_string(const GroundAggregate& a, const AtomTable& atoms) {
    std::string out = to_string(a.func);
    out += " {";
    for (std::size_t k = 0; k < a.elements.size(); ++k) {
        const auto& e = a.elements[k];
        out += k > 0 ? "; " : " ";
        std::string part;
        for (std::size_t t = 0; t < e.tuple.size(); ++t) {
            if (t > 0) part += ",";
            part += to_string(e.tuple[t]);
        }
        if (!e.condition.empty() || e.tuple.empty()) {
            part += part.empty() ? ":" : " :";
            for (std::size_t c = 0; c < e.condition.size(); ++c) {
                part += c > 0 ? ", " : " ";
                part += to_string(atoms.atom(e.condition[c]));
            }
        }
        out += part;
    }
    out += " } ";
    out += to_string(a.rel);
    out += " ";
    out += to_string(a.bound);
    return out;
}

std::string to_string(const Formula& f, const AtomTable& atoms) {
    switch (f.kind()) {
    case Formula::Kind::Atom: return to_string(atoms.atom(f.atom_id()));
    case Formula::Kind::True: return "#true";
    case Formula::Kind::False: return "#false";
    case Formula::Kind::Not: {
        const auto& c = f.children()[0];
        if (c.kind() == Formula::Kind::Atom) return "not " + to_string(c, atoms);
        return "not (" + to_string(c, atoms) + ")";
    }
    case Formula::Kind::And: return "(" + join_formulas(f.children(), atoms, " & ") + ")";
    case Formula::Kind::Or: return "(" + join_formulas(f.children(), atoms, " | ") + ")";
    case Formula::Kind::Implies:
        return "(" + to_string(f.children()[0], atoms) + " -> " + to_string(f.children()[1], atoms) + ")";
    case Formula::Kind::Aggregate: return to_string(f.aggregate_value(), atoms);
    }
    return "?";
}

std::string to_string(const GroundRule& r, const AtomTable& atoms) {
    std::string out = to_string(atoms.atom(r.head));
    bool first = true;
    for (const auto& f : r.body) {
        if (f.kind() == Formula::Kind::True) continue;
        out += first ? " :- " : ", ";
        out += to_string(f, atoms);
        first = false;
    }
    out += ".";
    return out;
}

std::string render(const GroundProgram& g, const AtomTable& atoms) {
    std::string out;
    for (const auto& r : g) {
        out += to_string(r, atoms);
        out += "\n";
    }
    return out;
}

std::string to_string(const AtomSet& s, const AtomTable& atoms) {
    std::string out = "{";
    bool first = true;
    for (AtomId a : s) {
        if (!first) out += ",";
        out += to_string(atoms.atom(a));
        first = false;
    }
    out += "}";
    return out;
}

} // namespace mground
