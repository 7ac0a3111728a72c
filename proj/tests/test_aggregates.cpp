#include "suites.hpp"

#include <gtest/gtest.h>

using namespace mground;
using namespace mground::testing;

namespace {

std::vector<Term> ints(std::initializer_list<std::int64_t> xs) {
    std::vector<Term> out;
    for (auto x : xs) out.push_back(Term::integer(x));
    return out;
}

// count{X : p(X)} >= 2 over p(1), p(2), p(3) with atoms 0, 1, 2.
GroundAggregate count_at_least_two() {
    GroundAggregate a{AggregateFunction::Count, Relation::GreaterEq, Term::integer(2), {}};
    for (AtomId k = 0; k < 3; ++k) a.elements.push_back({ints({static_cast<std::int64_t>(k) + 1}), {k}});
    return a;
}

// Company aggregate for sigma3: {20 : owns(c1,c3,20); 35,c2 : controls(c1,c2), owns(c2,c3,35)} > 50.
struct Company {
    AtomTable t;
    AtomId owns13 = t.intern(Atom{"owns", {Term::constant("c1"), Term::constant("c3"), Term::integer(20)}});
    AtomId owns23 = t.intern(Atom{"owns", {Term::constant("c2"), Term::constant("c3"), Term::integer(35)}});
    AtomId controls12 = t.intern(Atom{"controls", {Term::constant("c1"), Term::constant("c2")}});
    GroundAggregate g3{AggregateFunction::SumPlus, Relation::Greater, Term::integer(50),
                       {{ints({20}), {owns13}}, {{Term::integer(35), Term::constant("c2")}, {controls12, owns23}}}};
    GroundAggregate g4{AggregateFunction::SumPlus, Relation::Greater, Term::integer(50), {{ints({35}), {owns23}}}};
};

} // namespace

TEST(Weight, Examples) {
    EXPECT_EQ(weight(ints({60})).value, 60);
    EXPECT_EQ(weight({}).value, 0);
    EXPECT_EQ(weight({Term::constant("c2"), Term::integer(5)}).value, 0);
    auto w = weight(ints({-4, 1}));
    EXPECT_EQ(w.value, -4);
    EXPECT_EQ(w.positive, 0);
    EXPECT_EQ(w.negative, -4);
}

TEST(ApplyAggregate, Examples) {
    EXPECT_EQ(apply_aggregate(AggregateFunction::Count, {}), AggValue::finite(0));
    EXPECT_EQ(apply_aggregate(AggregateFunction::SumPlus, {ints({60})}), AggValue::finite(60));
    EXPECT_TRUE(apply_aggregate(AggregateFunction::SumPlus, {ints({60})}).satisfies(Relation::Greater, Term::integer(50)));
    EXPECT_EQ(apply_aggregate(AggregateFunction::Sum, {{Term::integer(35), Term::constant("c2")}, ints({20})}),
              AggValue::finite(55));
    // Repeated tuples count once.
    EXPECT_EQ(apply_aggregate(AggregateFunction::Sum, {ints({2}), ints({2}), ints({-1})}), AggValue::finite(1));
    EXPECT_EQ(apply_aggregate(AggregateFunction::SumMinus, {ints({2}), ints({-3})}), AggValue::finite(-3));
    EXPECT_EQ(apply_aggregate(AggregateFunction::Count, {ints({2}), {Term::constant("a")}}), AggValue::finite(2));
}

TEST(ApplyAggregate, OverflowIsReported) {
    EXPECT_THROW(apply_aggregate(AggregateFunction::Sum, {ints({INT64_MAX}), ints({1})}), std::overflow_error);
    EXPECT_THROW(apply_aggregate(AggregateFunction::Sum, {ints({INT64_MIN}), ints({-1})}), std::overflow_error);
}

TEST(AggValue, ComparesWithSpecialBounds) {
    EXPECT_TRUE(AggValue::finite(3).satisfies(Relation::Less, Term::sup()));
    EXPECT_TRUE(AggValue::finite(3).satisfies(Relation::Greater, Term::inf()));
    EXPECT_TRUE(AggValue::finite(3).satisfies(Relation::Less, Term::constant("a")));
    EXPECT_TRUE(AggValue::plus_inf().satisfies(Relation::Equal, Term::sup()));
}

TEST(Justifies, Examples) {
    Company c;
    EXPECT_FALSE(justifies({}, c.g3));
    GroundAggregate g1{AggregateFunction::SumPlus, Relation::Greater, Term::integer(50), {{ints({60}), {0}}}};
    EXPECT_TRUE(justifies(g1.elements, g1));
    EXPECT_FALSE(justifies(c.g4.elements, c.g4));
    EXPECT_TRUE(justifies(c.g3.elements, c.g3));
}

TEST(Classify, Examples) {
    EXPECT_EQ(classify(AggregateFunction::SumPlus, Relation::Greater), Monotonicity::Monotone);
    EXPECT_EQ(classify(AggregateFunction::Count, Relation::LessEq), Monotonicity::Antimonotone);
    EXPECT_EQ(classify(AggregateFunction::Sum, Relation::Equal), Monotonicity::Neither);
    EXPECT_EQ(classify(AggregateFunction::Sum, Relation::Greater), Monotonicity::Neither);
    EXPECT_EQ(classify(AggregateFunction::SumMinus, Relation::Less), Monotonicity::Monotone);
    EXPECT_EQ(classify(AggregateFunction::SumMinus, Relation::GreaterEq), Monotonicity::Antimonotone);
    EXPECT_EQ(classify(AggregateFunction::Count, Relation::NotEqual), Monotonicity::Neither);
}

TEST(TranslateBounded, CountExample) {
    AtomTable t;
    for (int k = 1; k <= 3; ++k) t.intern(Atom{"p", ints({static_cast<std::int64_t>(k)})});
    Formula f = translate_bounded(count_at_least_two(), 12, false);
    ASSERT_EQ(f.kind(), Formula::Kind::And);
    ASSERT_EQ(f.children().size(), 4U);
    EXPECT_EQ(to_string(f.children()[0], t),
              "((p(1) & p(2)) | (p(1) & p(3)) | (p(2) & p(3)) | (p(1) & p(2) & p(3)))");
    EXPECT_EQ(to_string(f.children()[1], t), "(p(1) -> (p(2) | p(3) | (p(2) & p(3))))");
    // Monotone: only the empty antecedent is kept.
    Formula pruned = translate_bounded(count_at_least_two());
    EXPECT_EQ(to_string(pruned, t), to_string(f.children()[0], t));
}

TEST(TranslateBounded, MonotoneSingleElement) {
    GroundAggregate g1{AggregateFunction::SumPlus, Relation::Greater, Term::integer(50), {{ints({60}), {0}}}};
    EXPECT_EQ(translate_bounded(g1), Formula::atom(0));
}

TEST(TranslateBounded, EmptySetJustifying) {
    GroundAggregate a{AggregateFunction::Count, Relation::GreaterEq, Term::integer(0), {}};
    EXPECT_EQ(translate_bounded(a).kind(), Formula::Kind::True);
    GroundAggregate b{AggregateFunction::Count, Relation::Greater, Term::integer(0), {}};
    EXPECT_EQ(translate_bounded(b).kind(), Formula::Kind::False);
}

TEST(TranslateBounded, Limit) {
    GroundAggregate a{AggregateFunction::Count, Relation::GreaterEq, Term::integer(2), {}};
    for (AtomId k = 0; k < 13; ++k) a.elements.push_back({ints({static_cast<std::int64_t>(k)}), {k}});
    EXPECT_THROW(translate_bounded(a), ExpansionLimitError);
    EXPECT_NO_THROW(translate_bounded(a, 13));
}

TEST(PropagateCheck, Examples) {
    Company c;
    AtomSet facts{c.owns13, c.owns23, c.controls12};
    EXPECT_TRUE(propagate_check(c.g3, facts, facts, PropagationMode::Possible));
    EXPECT_FALSE(propagate_check(c.g4, facts, facts, PropagationMode::Possible));

    GroundAggregate one{AggregateFunction::Count, Relation::GreaterEq, Term::integer(2), {{ints({1}), {0}}}};
    EXPECT_FALSE(propagate_check(one, {}, AtomSet{0}, PropagationMode::Possible));

    GroundAggregate eq{AggregateFunction::Sum, Relation::Equal, Term::integer(5), {{ints({2}), {0}}, {ints({3}), {1}}}};
    EXPECT_TRUE(propagate_check(eq, {}, AtomSet{0, 1}, PropagationMode::Possible));
    EXPECT_EQ(propagate_check(eq, {}, AtomSet{0, 1}, PropagationMode::Possible),
              holds_reduct(translate_bounded(eq, 12, false), {}, AtomSet{0, 1}));
    EXPECT_FALSE(propagate_check(eq, {}, AtomSet{0}, PropagationMode::Possible));
}

TEST(PropagateCheck, ApproximationBeyondCapIsSound) {
    std::mt19937_64 rng(51);
    EvalOptions none;
    none.subset_sum_cap = 0;
    for (int k = 0; k < 300; ++k) {
        for (auto rel : {Relation::Equal, Relation::NotEqual}) {
            auto func = k % 2 == 0 ? AggregateFunction::Sum : AggregateFunction::Count;
            GroundAggregate a = random_aggregate(rng, func, rel, static_cast<std::size_t>(k % 7), 3);
            for (std::uint32_t im = 0; im < 8; ++im) {
                for (std::uint32_t jm = 0; jm < 8; ++jm) {
                    bool exact = propagate_check(a, mask_set(im), mask_set(jm), PropagationMode::Possible);
                    bool approx = propagate_check(a, mask_set(im), mask_set(jm), PropagationMode::Possible, none);
                    if (rel == Relation::Equal) {
                        EXPECT_TRUE(!exact || approx) << describe(a, im, jm);
                    } else {
                        EXPECT_TRUE(!approx || exact) << describe(a, im, jm);
                    }
                }
            }
        }
    }
}

TEST(PropagateCheck, ExhaustiveSuite) {
    auto r = run_propagation_suite(1234, 6, 2);
    EXPECT_GT(r.cases, 10000U);
    EXPECT_EQ(r.mismatches, 0U) << r.first_failure;
}

TEST(PropagateCheck, LargeWeightsStayExact) {
    GroundAggregate a{AggregateFunction::Sum, Relation::GreaterEq, Term::integer(0),
                      {{ints({INT64_MAX - 10}), {0}}, {ints({INT64_MIN + 10}), {1}}, {ints({5}), {2}}}};
    for (std::uint32_t im = 0; im < 8; ++im) {
        for (std::uint32_t jm = 0; jm < 8; ++jm) {
            EXPECT_EQ(propagate_check(a, mask_set(im), mask_set(jm), PropagationMode::Possible),
                      holds_reduct(translate_bounded(a, 12, false), mask_set(im), mask_set(jm)))
                << im << " " << jm;
        }
    }
}
