#include "mground/aggregates.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace mground {

Monotonicity classify(AggregateFunction func, Relation rel) {
    bool lower = rel == Relation::Greater || rel == Relation::GreaterEq;
    bool upper = rel == Relation::Less || rel == Relation::LessEq;
    switch (func) {
    case AggregateFunction::Count:
    case AggregateFunction::SumPlus:
        if (lower) return Monotonicity::Monotone;
        if (upper) return Monotonicity::Antimonotone;
        break;
    case AggregateFunction::SumMinus:
        if (upper) return Monotonicity::Monotone;
        if (lower) return Monotonicity::Antimonotone;
        break;
    case AggregateFunction::Sum: break;
    }
    return Monotonicity::Neither;
}

Monotonicity classify(const Aggregate& a) { return classify(a.func, a.rel); }
Monotonicity classify(const GroundAggregate& a) { return classify(a.func, a.rel); }

Weight weight(const std::vector<Term>& tuple) {
    Weight w;
    if (!tuple.empty() && tuple.front().is_integer()) w.value = tuple.front().value();
    w.positive = std::max<std::int64_t>(w.value, 0);
    w.negative = std::min<std::int64_t>(w.value, 0);
    return w;
}

std::strong_ordering AggValue::compare(const Term& bound) const {
    switch (kind_) {
    case Kind::Finite: return term_compare(Term::integer(value_), bound);
    case Kind::PlusInf: return term_compare(Term::sup(), bound);
    case Kind::MinusInf: return term_compare(Term::inf(), bound);
    }
    return std::strong_ordering::equal;
}

namespace {

using Wide = __int128;

std::int64_t contribution(AggregateFunction func, const std::vector<Term>& tuple) {
    Weight w = weight(tuple);
    switch (func) {
    case AggregateFunction::Count: return 1;
    case AggregateFunction::Sum: return w.value;
    case AggregateFunction::SumPlus: return w.positive;
    case AggregateFunction::SumMinus: return w.negative;
    }
    return 0;
}

bool fits(Wide v) {
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

// Compares a wide aggregate value against the bound.
bool wide_satisfies(Wide v, Relation rel, const Term& bound) {
    if (fits(v)) return AggValue::finite(static_cast<std::int64_t>(v)).satisfies(rel, bound);
    // Out of 64-bit range means beyond every integer bound.
    return relation_holds(rel, v > 0 ? term_compare(Term::sup(), bound) : term_compare(Term::inf(), bound));
}

} // namespace

AggValue apply_aggregate(AggregateFunction func, const std::vector<std::vector<Term>>& tuples) {
    std::vector<const std::vector<Term>*> distinct;
    distinct.reserve(tuples.size());
    for (const auto& t : tuples) distinct.push_back(&t);
    std::sort(distinct.begin(), distinct.end(), [](const auto* a, const auto* b) { return *a < *b; });
    distinct.erase(std::unique(distinct.begin(), distinct.end(), [](const auto* a, const auto* b) { return *a == *b; }),
                   distinct.end());
    Wide sum = 0;
    for (const auto* t : distinct) sum += contribution(func, *t);
    if (!fits(sum)) throw std::overflow_error("aggregate value exceeds the 64-bit integer range");
    return AggValue::finite(static_cast<std::int64_t>(sum));
}

bool justifies(const std::vector<GroundElement>& subset, const GroundAggregate& a) {
    std::vector<std::vector<Term>> tuples;
    tuples.reserve(subset.size());
    for (const auto& e : subset) tuples.push_back(e.tuple);
    return apply_aggregate(a.func, tuples).satisfies(a.rel, a.bound);
}

Formula translate_bounded(const GroundAggregate& input, std::size_t limit, bool prune_monotone) {
    GroundAggregate a = input;
    a.normalize();
    const std::size_t n = a.elements.size();
    if (n > limit || n >= 31) {
        throw ExpansionLimitError("aggregate has " + std::to_string(n) + " element instances, limit is " +
                                  std::to_string(limit));
    }
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    auto pick = [&](std::uint32_t mask) {
        std::vector<GroundElement> out;
        for (std::size_t k = 0; k < n; ++k) {
            if ((mask >> k) & 1U) out.push_back(a.elements[k]);
        }
        return out;
    };
    auto conditions = [&](std::uint32_t mask) {
        std::vector<Formula> atoms;
        for (std::size_t k = 0; k < n; ++k) {
            if ((mask >> k) & 1U) {
                for (AtomId c : a.elements[k].condition) atoms.push_back(Formula::atom(c));
            }
        }
        return Formula::conjunction(std::move(atoms));
    };
    std::vector<bool> justified(std::size_t{1} << n);
    for (std::uint32_t mask = 0; mask <= full; ++mask) justified[mask] = justifies(pick(mask), a);

    const bool only_empty = prune_monotone && classify(a) == Monotonicity::Monotone;
    std::vector<Formula> conjuncts;
    for (std::uint32_t d = 0; d <= full; ++d) {
        if (justified[d]) continue;
        if (only_empty && d != 0) break;
        std::vector<Formula> options;
        const std::uint32_t rest = full & ~d;
        // Enumerate the subsets of `rest` in increasing order.
        for (std::uint32_t c = 0;; c = (c - rest) & rest) {
            if (justified[c | d]) options.push_back(conditions(c));
            if (c == rest) break;
        }
        Formula antecedent = conditions(d);
        Formula consequent = Formula::disjunction(std::move(options));
        conjuncts.push_back(antecedent.kind() == Formula::Kind::True
                                ? std::move(consequent)
                                : Formula::implication(std::move(antecedent), std::move(consequent)));
    }
    return Formula::conjunction(std::move(conjuncts));
}

namespace {

struct TupleState {
    std::int64_t value = 0;
    bool in_i = false;
    bool in_j = false;
};

std::vector<Wide> subset_sums(const std::vector<std::int64_t>& values) {
    std::vector<Wide> sums{0};
    for (auto v : values) {
        if (v == 0) continue;
        std::size_t n = sums.size();
        for (std::size_t k = 0; k < n; ++k) sums.push_back(sums[k] + v);
        std::sort(sums.begin(), sums.end());
        sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
    }
    return sums;
}

// Lower or upper check: whether every choice from the I-side can be completed
// from the J-side so that the value stays above (or below) the bound.
bool bound_check(const std::vector<TupleState>& tuples, Relation rel, const Term& bound) {
    bool lower = rel == Relation::Greater || rel == Relation::GreaterEq;
    Wide v = 0;
    for (const auto& t : tuples) {
        Wide down = std::min<std::int64_t>(t.value, 0);
        Wide up = std::max<std::int64_t>(t.value, 0);
        if (t.in_i) v += lower ? down : up;
        if (t.in_j) v += lower ? up : down;
    }
    return wide_satisfies(v, rel, bound);
}

} // namespace

bool propagate_check(const GroundAggregate& a, const AtomSet& i, const AtomSet& j, PropagationMode mode,
                     const EvalOptions& opts) {
    const AtomSet& certain = i;
    const AtomSet& possible = mode == PropagationMode::Classical ? i : j;

    std::map<std::vector<Term>, TupleState> by_tuple;
    for (const auto& e : a.elements) {
        auto sat = [&](const AtomSet& s) {
            return std::all_of(e.condition.begin(), e.condition.end(), [&](AtomId c) { return s.contains(c); });
        };
        bool in_i = sat(certain);
        bool in_j = sat(possible);
        if (!in_i && !in_j) continue;
        auto& st = by_tuple[e.tuple];
        st.value = contribution(a.func, e.tuple);
        st.in_i = st.in_i || in_i;
        st.in_j = st.in_j || in_j;
    }
    std::vector<TupleState> tuples;
    tuples.reserve(by_tuple.size());
    for (const auto& [_, st] : by_tuple) tuples.push_back(st);

    auto total = [&](bool from_i) {
        Wide v = 0;
        for (const auto& t : tuples) {
            if (from_i ? t.in_i : t.in_j) v += t.value;
        }
        return v;
    };

    // A non-integer bound compares the same way against every integer.
    if (!a.bound.is_integer()) return wide_satisfies(0, a.rel, a.bound);

    switch (classify(a)) {
    case Monotonicity::Monotone: return wide_satisfies(total(false), a.rel, a.bound);
    case Monotonicity::Antimonotone: return wide_satisfies(total(true), a.rel, a.bound);
    case Monotonicity::Neither: break;
    }
    if (a.rel != Relation::Equal && a.rel != Relation::NotEqual) return bound_check(tuples, a.rel, a.bound);

    // Tuples in both sets are always present in the worst case and can always
    // be added, so only the one-sided tuples need a search.
    Wide common = 0;
    std::vector<std::int64_t> i_only, j_only;
    for (const auto& t : tuples) {
        if (t.in_i && t.in_j) {
            common += t.value;
        } else if (t.in_i) {
            i_only.push_back(t.value);
        } else {
            j_only.push_back(t.value);
        }
    }
    const Wide target = Wide{a.bound.value()} - common;
    if (i_only.size() + j_only.size() <= opts.subset_sum_cap) {
        auto from_i = subset_sums(i_only);
        auto from_j = subset_sums(j_only);
        if (a.rel == Relation::Equal) {
            return std::all_of(from_i.begin(), from_i.end(), [&](Wide x) {
                return std::binary_search(from_j.begin(), from_j.end(), target - x);
            });
        }
        if (from_j.size() > 1) return true;
        return !std::binary_search(from_i.begin(), from_i.end(), target);
    }
    if (a.rel == Relation::Equal) {
        return bound_check(tuples, Relation::LessEq, a.bound) && bound_check(tuples, Relation::GreaterEq, a.bound);
    }
    return bound_check(tuples, Relation::Less, a.bound) || bound_check(tuples, Relation::Greater, a.bound);
}

} // namespace mground
