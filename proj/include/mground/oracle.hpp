// Brute-force reference semantics for small programs: full instantiation
// over a finite universe, formula expansion of aggregates and enumeration of
// stable, FOID-stable and well-founded models.
#pragma once

#include "mground/aggregates.hpp"

#include <stdexcept>

namespace mground {

class OracleLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Ground terms occurring in the program, sorted. For function-free programs
// these are its constants and integers.
std::vector<Term> program_universe(const Program& p);

// Every instance of every rule over the universe. Aggregates keep all element
// instances; rules with a false comparison are dropped.
GroundProgram naive_ground(const Program& p, const std::vector<Term>& universe, AtomTable& atoms,
                           std::size_t max_rules = 10000);

// Ferraris' translation: for every D not justifying `a`, the conditions of D
// imply the disjunction of the remaining elements.
Formula translate_ferraris(const GroundAggregate& a, std::size_t limit = 12);

enum class Translation : std::uint8_t { Bounded, Ferraris };

GroundProgram expand_aggregates(const GroundProgram& g, Translation t = Translation::Bounded, std::size_t limit = 12);

// Reduct of f with respect to x: subformulas false in x become false.
Formula ferraris_reduct(const Formula& f, const AtomSet& x);
// Reduct replacing negative occurrences of atoms by true or false by i.
Formula foid_reduct(const Formula& f, const AtomSet& i, bool positive = true);

// Least model of the FOID reduct with respect to j on top of `context`.
AtomSet oracle_stable_operator(const GroundProgram& expanded, const AtomSet& context, const AtomSet& j);

// Candidates range over subsets of the rule heads; at most `max_atoms` heads.
std::vector<AtomSet> enumerate_stable(const GroundProgram& g, std::size_t max_atoms = 20);
std::vector<AtomSet> enumerate_foid_stable(const GroundProgram& g, std::size_t max_atoms = 20);
Interp4 wf_oracle(const GroundProgram& g);

} // namespace mground
