// Safety, rule dependencies and instantiation sequences.
#pragma once

#include "mground/syntax.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mground {

struct BodyOccurrences {
    std::vector<Atom> positive;
    std::vector<Atom> negative;
};

// Condition atoms of an aggregate count positively; they also count
// negatively unless the aggregate is monotone.
BodyOccurrences body_occurrences(const BodyLiteral& b);
BodyOccurrences body_occurrences(const Rule& r);

class SafetyError : public std::runtime_error {
public:
    SafetyError(std::string variable, std::string location, const std::string& rule_text);
    const std::string& variable() const { return variable_; }
    const std::string& location() const { return location_; }

private:
    std::string variable_;
    std::string location_;
};

// Variables of the head, of literals, of comparisons and of aggregate bounds,
// without repeats, in textual order.
std::vector<std::string> global_variables(const Rule& r);

void check_safety(const Rule& r);
void check_safety(const Program& p);

enum class Sign : std::uint8_t { Positive, Negative };

struct DependencyEdge {
    std::size_t from = 0; // depending rule
    std::size_t to = 0;   // rule whose head occurs in the body of `from`
    Sign sign = Sign::Positive;
    friend auto operator<=>(const DependencyEdge&, const DependencyEdge&) = default;
};

struct DependencyGraph {
    std::size_t rule_count = 0;
    std::vector<DependencyEdge> edges; // sorted, no duplicates
};

DependencyGraph build_dependency_graph(const Program& p);

using PredicateSet = std::set<Signature>;

struct Component {
    std::vector<std::size_t> rules; // ascending rule indices
    bool stratified = true;
    // Predicates of negative body occurrences that are defined by this or a
    // later component.
    PredicateSet external;
    std::size_t outer = 0; // position in the unrefined sequence
    std::size_t inner = 0; // position inside the outer component after refinement
};

struct ComponentSequence {
    std::vector<Component> components;
};

// Strongly connected components in dependency order. Independent components
// are ordered by their smallest rule index.
ComponentSequence instantiation_sequence(const Program& p);

// Splits every component along positive dependencies. Subcomponents inherit
// the stratification flag; external sets are recomputed over the refined order.
ComponentSequence refine_sequence(const Program& p, const ComponentSequence& s);

// Predicates occurring in negative body positions of the given rules.
PredicateSet negative_predicates(const Program& p, const std::vector<std::size_t>& rules);
PredicateSet head_predicates(const Program& p, const std::vector<std::size_t>& rules);

std::string to_string(const Signature& s);

} // namespace mground
