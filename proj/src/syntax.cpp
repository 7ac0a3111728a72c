#include "mground/syntax.hpp"

#include <functional>
#include <ostream>
#include <sstream>

namespace mground {

namespace {

void hash_combine(std::size_t& seed, std::size_t value) {
    seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

template <class T>
std::strong_ordering compare_lists(const std::vector<T>& a, const std::vector<T>& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (auto c = a[i] <=> b[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

} // namespace

Term Term::variable(std::string name) {
    Term t;
    t.kind_ = Kind::Variable;
    t.name_ = std::move(name);
    return t;
}

Term Term::integer(std::int64_t value) {
    Term t;
    t.kind_ = Kind::Integer;
    t.value_ = value;
    return t;
}

Term Term::function(std::string name, std::vector<Term> args) {
    Term t;
    t.kind_ = Kind::Function;
    t.name_ = std::move(name);
    t.args_ = std::move(args);
    return t;
}

Term Term::sup() {
    Term t;
    t.kind_ = Kind::Sup;
    return t;
}

Term Term::inf() {
    Term t;
    t.kind_ = Kind::Inf;
    return t;
}

bool Term::ground() const {
    if (kind_ == Kind::Variable) return false;
    for (const auto& a : args_) {
        if (!a.ground()) return false;
    }
    return true;
}

void Term::collect_variables(std::vector<std::string>& out) const {
    if (kind_ == Kind::Variable) {
        out.push_back(name_);
        return;
    }
    for (const auto& a : args_) a.collect_variables(out);
}

std::size_t Term::hash() const {
    std::size_t seed = static_cast<std::size_t>(kind_);
    switch (kind_) {
    case Kind::Integer: hash_combine(seed, std::hash<std::int64_t>{}(value_)); break;
    case Kind::Function:
    case Kind::Variable:
        hash_combine(seed, std::hash<std::string>{}(name_));
        for (const auto& a : args_) hash_combine(seed, a.hash());
        break;
    default: break;
    }
    return seed;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    switch (a.kind_) {
    case Term::Kind::Integer: return a.value_ <=> b.value_;
    case Term::Kind::Variable: return a.name_ <=> b.name_;
    case Term::Kind::Function:
        if (auto c = a.args_.size() <=> b.args_.size(); c != 0) return c;
        if (auto c = a.name_ <=> b.name_; c != 0) return c;
        return compare_lists(a.args_, b.args_);
    default: return std::strong_ordering::equal;
    }
}

std::strong_ordering term_compare(const Term& a, const Term& b) { return a <=> b; }

bool Atom::ground() const {
    for (const auto& t : args) {
        if (!t.ground()) return false;
    }
    return true;
}

void Atom::collect_variables(std::vector<std::string>& out) const {
    for (const auto& t : args) t.collect_variables(out);
}

std::size_t Atom::hash() const {
    std::size_t seed = std::hash<std::string>{}(predicate);
    for (const auto& t : args) hash_combine(seed, t.hash());
    return seed;
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    return compare_lists(a.args, b.args);
}

bool relation_holds(Relation rel, std::strong_ordering cmp) {
    switch (rel) {
    case Relation::Less: return cmp < 0;
    case Relation::LessEq: return cmp <= 0;
    case Relation::Greater: return cmp > 0;
    case Relation::GreaterEq: return cmp >= 0;
    case Relation::Equal: return cmp == 0;
    case Relation::NotEqual: return cmp != 0;
    }
    return false;
}

const char* to_string(Relation rel) {
    switch (rel) {
    case Relation::Less: return "<";
    case Relation::LessEq: return "<=";
    case Relation::Greater: return ">";
    case Relation::GreaterEq: return ">=";
    case Relation::Equal: return "=";
    case Relation::NotEqual: return "!=";
    }
    return "?";
}

bool eval_comparison(const Comparison& c) {
    return relation_holds(c.rel, term_compare(c.left, c.right));
}

const char* to_string(AggregateFunction f) {
    switch (f) {
    case AggregateFunction::Count: return "#count";
    case AggregateFunction::Sum: return "#sum";
    case AggregateFunction::SumPlus: return "#sum+";
    case AggregateFunction::SumMinus: return "#sum-";
    }
    return "?";
}

std::ostream& operator<<(std::ostream& out, const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Inf: return out << "#inf";
    case Term::Kind::Sup: return out << "#sup";
    case Term::Kind::Integer: return out << t.value();
    case Term::Kind::Variable: return out << t.name();
    case Term::Kind::Function:
        out << t.name();
        if (!t.args().empty()) {
            out << '(';
            for (std::size_t i = 0; i < t.args().size(); ++i) {
                if (i > 0) out << ',';
                out << t.args()[i];
            }
            out << ')';
        }
        return out;
    }
    return out;
}

std::ostream& operator<<(std::ostream& out, const Atom& a) {
    out << a.predicate;
    if (!a.args.empty()) {
        out << '(';
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i > 0) out << ',';
            out << a.args[i];
        }
        out << ')';
    }
    return out;
}

namespace {

template <class T>
std::string stringify(const T& value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

} // namespace

std::string to_string(const Term& t) { return stringify(t); }
std::string to_string(const Atom& a) { return stringify(a); }

std::string to_string(const Literal& l) {
    return l.negated ? "not " + to_string(l.atom) : to_string(l.atom);
}

std::string to_string(const Comparison& c) {
    return to_string(c.left) + " " + to_string(c.rel) + " " + to_string(c.right);
}

std::string to_string(const AggregateElement& e) {
    std::string out;
    for (std::size_t i = 0; i < e.tuple.size(); ++i) {
        if (i > 0) out += ",";
        out += to_string(e.tuple[i]);
    }
    if (!e.condition.empty() || e.tuple.empty()) {
        out += out.empty() ? ":" : " :";
        for (std::size_t i = 0; i < e.condition.size(); ++i) {
            out += i > 0 ? ", " : " ";
            out += to_string(e.condition[i]);
        }
    }
    return out;
}

std::string to_string(const Aggregate& a) {
    std::string out = to_string(a.func);
    out += " {";
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
        out += i > 0 ? "; " : " ";
        out += to_string(a.elements[i]);
    }
    out += " } ";
    out += to_string(a.rel);
    out += " ";
    out += to_string(a.bound);
    return out;
}

std::string to_string(const BodyLiteral& b) {
    return std::visit([](const auto& x) { return to_string(x); }, b);
}

std::string to_string(const Rule& r) {
    std::string out = to_string(r.head);
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        out += i > 0 ? ", " : " :- ";
        out += to_string(r.body[i]);
    }
    out += ".";
    return out;
}

std::string render(const Program& p) {
    std::string out;
    for (const auto& r : p.rules) {
        out += to_string(r);
        out += "\n";
    }
    return out;
}

std::ostream& operator<<(std::ostream& out, const Rule& r) { return out << to_string(r); }

} // namespace mground
