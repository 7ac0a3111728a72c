// Abstract syntax of aggregate programs, the order on ground terms and
// textual rendering.
#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace mground {

class Term {
public:
    // Declaration order doubles as the cross-kind order of ground terms.
    enum class Kind : std::uint8_t { Inf, Integer, Function, Sup, Variable };

    Term() = default;

    static Term variable(std::string name);
    static Term integer(std::int64_t value);
    static Term function(std::string name, std::vector<Term> args = {});
    static Term constant(std::string name) { return function(std::move(name)); }
    static Term sup();
    static Term inf();

    Kind kind() const { return kind_; }
    bool is_variable() const { return kind_ == Kind::Variable; }
    bool is_integer() const { return kind_ == Kind::Integer; }
    std::int64_t value() const { return value_; }
    const std::string& name() const { return name_; }
    const std::vector<Term>& args() const { return args_; }

    bool ground() const;
    // Appends variable names in textual (left to right) order, with repeats.
    void collect_variables(std::vector<std::string>& out) const;
    std::size_t hash() const;

    friend bool operator==(const Term&, const Term&) = default;
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
    Kind kind_ = Kind::Integer;
    std::int64_t value_ = 0;
    std::string name_;
    std::vector<Term> args_;
};

// Total order on ground terms: #inf < integers < functions < #sup.
// Functions compare by arity, then name, then arguments.
std::strong_ordering term_compare(const Term& a, const Term& b);

struct Signature {
    std::string name;
    std::size_t arity = 0;
    friend auto operator<=>(const Signature&, const Signature&) = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    Signature signature() const { return {predicate, args.size()}; }
    bool ground() const;
    void collect_variables(std::vector<std::string>& out) const;
    std::size_t hash() const;
    friend bool operator==(const Atom&, const Atom&) = default;
    friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

struct AtomHash {
    std::size_t operator()(const Atom& a) const { return a.hash(); }
};

enum class Relation : std::uint8_t { Less, LessEq, Greater, GreaterEq, Equal, NotEqual };

bool relation_holds(Relation rel, std::strong_ordering cmp);
const char* to_string(Relation rel);

struct Literal {
    Atom atom;
    bool negated = false;
    friend bool operator==(const Literal&, const Literal&) = default;
};

struct Comparison {
    Term left;
    Relation rel = Relation::Equal;
    Term right;
    friend bool operator==(const Comparison&, const Comparison&) = default;
};

// Requires both sides ground.
bool eval_comparison(const Comparison& c);

enum class AggregateFunction : std::uint8_t { Count, Sum, SumPlus, SumMinus };

const char* to_string(AggregateFunction f);

struct AggregateElement {
    std::vector<Term> tuple;
    std::vector<Atom> condition;
    friend bool operator==(const AggregateElement&, const AggregateElement&) = default;
};

struct Aggregate {
    AggregateFunction func = AggregateFunction::Count;
    std::vector<AggregateElement> elements;
    Relation rel = Relation::GreaterEq;
    Term bound;
    friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

using BodyLiteral = std::variant<Literal, Comparison, Aggregate>;

struct Rule {
    Atom head;
    std::vector<BodyLiteral> body;
    friend bool operator==(const Rule&, const Rule&) = default;
};

struct Program {
    std::vector<Rule> rules;
    friend bool operator==(const Program&, const Program&) = default;
};

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l);
std::string to_string(const Comparison& c);
std::string to_string(const AggregateElement& e);
std::string to_string(const Aggregate& a);
std::string to_string(const BodyLiteral& b);
std::string to_string(const Rule& r);
// One rule per line; the empty program renders as "".
std::string render(const Program& p);

std::ostream& operator<<(std::ostream& out, const Term& t);
std::ostream& operator<<(std::ostream& out, const Atom& a);
std::ostream& operator<<(std::ostream& out, const Rule& r);

} // namespace mground
