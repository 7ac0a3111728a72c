// Aggregate semantics: weights, justification, the bounded translation and
// propagation checks on ground aggregates.
#pragma once

#include "mground/ground.hpp"

#include <stdexcept>

namespace mground {

enum class Monotonicity : std::uint8_t { Monotone, Antimonotone, Neither };

Monotonicity classify(AggregateFunction func, Relation rel);
Monotonicity classify(const Aggregate& a);
Monotonicity classify(const GroundAggregate& a);

struct Weight {
    std::int64_t value = 0;
    std::int64_t positive = 0;
    std::int64_t negative = 0;
};

// The first tuple element if it is an integer, 0 otherwise.
Weight weight(const std::vector<Term>& tuple);

class AggValue {
public:
    enum class Kind : std::uint8_t { MinusInf, Finite, PlusInf };

    static AggValue finite(std::int64_t v) { return {Kind::Finite, v}; }
    static AggValue plus_inf() { return {Kind::PlusInf, 0}; }
    static AggValue minus_inf() { return {Kind::MinusInf, 0}; }

    Kind kind() const { return kind_; }
    std::int64_t value() const { return value_; }
    // Infinite values compare like #sup and #inf.
    std::strong_ordering compare(const Term& bound) const;
    bool satisfies(Relation rel, const Term& bound) const { return relation_holds(rel, compare(bound)); }
    friend bool operator==(const AggValue&, const AggValue&) = default;

private:
    AggValue(Kind k, std::int64_t v)
        : kind_(k)
        , value_(v) {}
    Kind kind_;
    std::int64_t value_;
};

// Duplicate tuples count once. Throws std::overflow_error when the result
// leaves the 64-bit range.
AggValue apply_aggregate(AggregateFunction func, const std::vector<std::vector<Term>>& tuples);

bool justifies(const std::vector<GroundElement>& subset, const GroundAggregate& a);

class ExpansionLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Conjunction over element subsets D that do not justify `a` of
// (conditions of D -> disjunction over C with C u D justifying `a` of the
// conditions of C). For monotone aggregates only the D = {} conjunct is kept
// unless `prune_monotone` is false.
Formula translate_bounded(const GroundAggregate& a, std::size_t limit = 12, bool prune_monotone = true);

enum class PropagationMode : std::uint8_t { Possible, Classical };

// Possible: whether j satisfies the reduct of the bounded translation with
// respect to i. Classical: whether i satisfies the translation (j ignored).
// Equality and disequality are decided exactly by subset sums while at most
// opts.subset_sum_cap tuples are undecided; beyond that equality is
// overapproximated and disequality underapproximated.
bool propagate_check(const GroundAggregate& a, const AtomSet& i, const AtomSet& j, PropagationMode mode,
                     const EvalOptions& opts = {});

} // namespace mground
