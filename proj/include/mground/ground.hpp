// Ground atoms, formulas and rules together with the consequence, stable and
// well-founded operators over them.
#pragma once

#include "mground/syntax.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mground {

using AtomId = std::uint32_t;

// Interns ground atoms to dense ids in first-seen order.
class AtomTable {
public:
    AtomId intern(const Atom& atom);
    std::optional<AtomId> find(const Atom& atom) const;
    const Atom& atom(AtomId id) const { return atoms_[id]; }
    std::size_t size() const { return atoms_.size(); }
    // Ids of all interned atoms over the signature, in interning order.
    const std::vector<AtomId>& with_signature(const Signature& sig) const;

private:
    std::vector<Atom> atoms_;
    std::unordered_map<Atom, AtomId, AtomHash> ids_;
    std::map<Signature, std::vector<AtomId>> by_signature_;
};

// Set of atom ids stored as a bitset; iteration is in id order.
class AtomSet {
public:
    AtomSet() = default;
    AtomSet(std::initializer_list<AtomId> ids);

    bool contains(AtomId id) const {
        std::size_t w = id / 64;
        return w < words_.size() && ((words_[w] >> (id % 64)) & 1U) != 0;
    }
    bool insert(AtomId id);
    void erase(AtomId id);
    // Returns true if the set grew.
    bool insert_all(const AtomSet& other);
    std::size_t size() const;
    bool empty() const { return size() == 0; }
    bool subset_of(const AtomSet& other) const;
    std::vector<AtomId> elements() const;

    class iterator {
    public:
        using value_type = AtomId;
        using difference_type = std::ptrdiff_t;
        iterator() = default;
        iterator(const AtomSet* set, std::size_t pos)
            : set_(set)
            , pos_(pos) {
            settle();
        }
        AtomId operator*() const { return static_cast<AtomId>(pos_); }
        iterator& operator++() {
            ++pos_;
            settle();
            return *this;
        }
        iterator operator++(int) {
            auto old = *this;
            ++*this;
            return old;
        }
        friend bool operator==(const iterator& a, const iterator& b) { return a.pos_ == b.pos_; }

    private:
        void settle();
        const AtomSet* set_ = nullptr;
        std::size_t pos_ = 0;
    };
    iterator begin() const { return {this, 0}; }
    iterator end() const { return {this, words_.size() * 64}; }

    friend bool operator==(const AtomSet& a, const AtomSet& b);
    friend AtomSet operator|(const AtomSet& a, const AtomSet& b);
    friend AtomSet operator&(const AtomSet& a, const AtomSet& b);
    friend AtomSet operator-(const AtomSet& a, const AtomSet& b);

private:
    std::vector<std::uint64_t> words_;
};

// Four-valued interpretation: certain atoms I and possible atoms J.
struct Interp4 {
    AtomSet certain;
    AtomSet possible;
    friend bool operator==(const Interp4&, const Interp4&) = default;
};

// (I,J) <=p (I',J') iff I is a subset of I' and J' a subset of J.
bool less_precise_or_equal(const Interp4& a, const Interp4& b);
Interp4 join(const Interp4& a, const Interp4& b);

struct GroundElement {
    std::vector<Term> tuple;
    std::vector<AtomId> condition; // textual order, no duplicates
    friend auto operator<=>(const GroundElement&, const GroundElement&) = default;
};

struct GroundAggregate {
    AggregateFunction func = AggregateFunction::Count;
    Relation rel = Relation::GreaterEq;
    Term bound;
    std::vector<GroundElement> elements;

    // Removes repeated condition atoms, sorts elements and drops duplicates.
    void normalize();
    friend bool operator==(const GroundAggregate&, const GroundAggregate&) = default;
};

class Formula {
public:
    enum class Kind : std::uint8_t { Atom, True, False, Not, And, Or, Implies, Aggregate };

    static Formula atom(AtomId id);
    static Formula top();
    static Formula bottom();
    static Formula negation(Formula f);
    static Formula conjunction(std::vector<Formula> fs);
    static Formula disjunction(std::vector<Formula> fs);
    static Formula implication(Formula antecedent, Formula consequent);
    static Formula aggregate(GroundAggregate a);

    Kind kind() const { return kind_; }
    AtomId atom_id() const { return atom_; }
    const std::vector<Formula>& children() const { return children_; }
    const GroundAggregate& aggregate_value() const { return *aggregate_; }

    friend bool operator==(const Formula& a, const Formula& b);

private:
    Kind kind_ = Kind::True;
    AtomId atom_ = 0;
    std::vector<Formula> children_;
    std::shared_ptr<const GroundAggregate> aggregate_;
};

struct GroundRule {
    AtomId head = 0;
    std::vector<Formula> body; // conjunction
    friend bool operator==(const GroundRule&, const GroundRule&) = default;
};

using GroundProgram = std::vector<GroundRule>;

// Controls exact treatment of = and != aggregates; see propagate_check.
struct EvalOptions {
    std::size_t subset_sum_cap = 20;
};

// Classical satisfaction; aggregates are evaluated on the elements whose
// conditions hold in x.
bool holds(const Formula& f, const AtomSet& x, const EvalOptions& opts = {});
bool holds(const std::vector<Formula>& body, const AtomSet& x, const EvalOptions& opts = {});

// Whether j satisfies the reduct of f with respect to i: positive occurrences
// of atoms are read from j, negative occurrences from i.
bool holds_reduct(const Formula& f, const AtomSet& i, const AtomSet& j, const EvalOptions& opts = {});
bool holds_reduct(const std::vector<Formula>& body, const AtomSet& i, const AtomSet& j,
                  const EvalOptions& opts = {});

AtomSet immediate_consequence(const GroundProgram& g, const AtomSet& x, const EvalOptions& opts = {});

// Least fixed point of X -> T(context | X) for the reduct with respect to j.
AtomSet stable_relative(const GroundProgram& g, const AtomSet& context, const AtomSet& j,
                        const EvalOptions& opts = {});

// All atoms occurring in g, including aggregate conditions.
AtomSet program_atoms(const GroundProgram& g);
AtomSet heads(const GroundProgram& g);

// Least fixed point of (I,J) -> (S^Ir(J | Jr), S^Jr(I | Ir)) starting from the
// least precise interpretation. `on_step` sees every operator application.
Interp4 well_founded_model(const GroundProgram& g, const Interp4& context = {}, const EvalOptions& opts = {},
                           const std::function<void(const Interp4&)>& on_step = {});

// Keeps the rules whose bodies are not false under (I,J).
GroundProgram simplify(const GroundProgram& g, const Interp4& model, const EvalOptions& opts = {});

// Drops body conjuncts that are certainly true under the model: positive
// atoms in I, negations of atoms outside J, and aggregates whose value is
// settled by I and J.
GroundProgram strip_certain(const GroundProgram& g, const Interp4& model, const EvalOptions& opts = {});

std::string to_string(const Formula& f, const AtomTable& atoms);
std::string to_string(const GroundAggregate& a, const AtomTable& atoms);
std::string to_string(const GroundRule& r, const AtomTable& atoms);
// Facts render as "h."; true conjuncts are omitted.
std::string render(const GroundProgram& g, const AtomTable& atoms);
std::string to_string(const AtomSet& s, const AtomTable& atoms);

} // namespace mground
