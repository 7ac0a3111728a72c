#include "suites.hpp"

#include <gtest/gtest.h>

using namespace mground;
using namespace mground::testing;

namespace {

const char* const company = R"(
controls(X,Y) :- #sum+ { S : owns(X,Y,S) ; S,Z : controls(X,Z), owns(Z,Y,S) } > 50,
                 company(X), company(Y), X != Y.
company(c1). company(c2). company(c3). company(c4).
owns(c1,c2,60). owns(c1,c3,20). owns(c2,c3,35). owns(c3,c4,51).
)";

std::string ground_text(const std::string& text, const GrounderOptions& opts = {}) {
    auto out = ground_program(parse_program(text), opts);
    return render(facts_first(out.rules), *out.atoms);
}

AtomSet intern_all(AtomTable& t, const std::string& facts) {
    AtomSet s;
    for (const auto& r : parse_program(facts).rules) s.insert(t.intern(r.head));
    return s;
}

} // namespace

TEST(Rewrite, Company) {
    Program p = parse_program(company);
    auto rc = rewrite_aggregates(p, {0});
    ASSERT_EQ(rc.alpha_rules.size(), 1U);
    ASSERT_EQ(rc.eta_rules.size(), 1U);
    ASSERT_EQ(rc.eps_rules.size(), 2U);
    ASSERT_EQ(rc.occurrences.size(), 1U);
    const auto& occ = rc.occurrences[0];
    EXPECT_EQ(occ.globals, (std::vector<std::string>{"X", "Y"}));
    EXPECT_EQ(to_string(rc.alpha_rules[0]), "controls(X,Y) :- " + occ.alpha + "(X,Y), company(X), company(Y), X != Y.");
    EXPECT_EQ(to_string(rc.eta_rules[0]), occ.eta + "(X,Y) :- 0 > 50, company(X), company(Y), X != Y.");
    EXPECT_EQ(to_string(rc.eps_rules[0]), occ.eps[0] + "(S,X,Y) :- owns(X,Y,S), company(X), company(Y), X != Y.");
    EXPECT_EQ(to_string(rc.eps_rules[1]),
              occ.eps[1] + "(S,Z,X,Y) :- controls(X,Z), owns(Z,Y,S), company(X), company(Y), X != Y.");
    EXPECT_NE(occ.eps[0], occ.eps[1]);
    EXPECT_EQ(occ.alpha.rfind("__", 0), 0U);
}

TEST(Rewrite, NormalRulesPassThrough) {
    Program p = parse_program("p(X) :- not q(X), u(X).");
    auto rc = rewrite_aggregates(p, {0});
    ASSERT_EQ(rc.alpha_rules.size(), 1U);
    EXPECT_EQ(rc.alpha_rules[0], p.rules[0]);
    EXPECT_TRUE(rc.eta_rules.empty());
    EXPECT_TRUE(rc.eps_rules.empty());
}

TEST(AuxiliaryInstances, GatherByGlobals) {
    AuxiliaryInstances aux;
    GlobalKey k1{Term::constant("c1"), Term::constant("c2")};
    GlobalKey k3{Term::constant("c1"), Term::constant("c3")};
    EXPECT_FALSE(aux.aggr_empty(0, k1));
    EXPECT_TRUE(aux.aggr_elem(0, k1).empty());
    aux.add_element(0, k1, {{Term::integer(60)}, {0}});
    aux.add_element(0, k3, {{Term::integer(20)}, {1}});
    aux.add_element(0, k3, {{Term::integer(35), Term::constant("c2")}, {2, 3}});
    aux.add_element(0, k3, {{Term::integer(20)}, {1}});
    aux.add_eta(1, k1);
    EXPECT_EQ(aux.aggr_elem(0, k1).size(), 1U);
    EXPECT_EQ(aux.aggr_elem(0, k3).size(), 2U);
    EXPECT_FALSE(aux.aggr_empty(0, k1));
    EXPECT_TRUE(aux.aggr_empty(1, k1));
    EXPECT_EQ(aux.keys(0), (std::set<GlobalKey>{k1, k3}));
    EXPECT_EQ(aux.keys(1), (std::set<GlobalKey>{k1}));
}

TEST(Propagate, CompanyFirstIteration) {
    Program p = parse_program(company);
    auto atoms = std::make_shared<AtomTable>();
    Grounder g(p, atoms);
    auto rc = rewrite_aggregates(p, {0});
    AtomSet facts = intern_all(*atoms, company);
    // Element instances available before any controls atom is known.
    auto id = [&](const char* text) { return atoms->intern(parse_program(text).rules[0].head); };
    AuxiliaryInstances aux;
    auto key = [](const char* x, const char* y) { return GlobalKey{Term::constant(x), Term::constant(y)}; };
    aux.add_element(0, key("c1", "c2"), {{Term::integer(60)}, {id("owns(c1,c2,60).")}});
    aux.add_element(0, key("c1", "c3"), {{Term::integer(20)}, {id("owns(c1,c3,20).")}});
    aux.add_element(0, key("c2", "c3"), {{Term::integer(35)}, {id("owns(c2,c3,35).")}});
    aux.add_element(0, key("c3", "c4"), {{Term::integer(51)}, {id("owns(c3,c4,51).")}});
    auto alpha = g.propagate(rc, aux, facts, facts);
    Names got = names(alpha, *atoms);
    const std::string a = rc.occurrences[0].alpha;
    EXPECT_EQ(got, (Names{a + "(c1,c2)", a + "(c3,c4)"}));
    // Once controls(c1,c2) holds, the c1/c3 aggregate is justified.
    AtomId c12 = id("controls(c1,c2).");
    aux.add_element(0, key("c1", "c3"), {{Term::integer(35), Term::constant("c2")}, {c12, id("owns(c2,c3,35).")}});
    facts.insert(c12);
    got = names(g.propagate(rc, aux, facts, facts), *atoms);
    EXPECT_EQ(got, (Names{a + "(c1,c2)", a + "(c3,c4)", a + "(c1,c3)"}));
}

TEST(Propagate, EmptyAggregateNeedsEtaInstance) {
    // #count{X : p(X)} >= 0 holds for the empty set, so the eta rule grounds.
    auto out = ground_program(parse_program("q(1).\nh :- #count { X : p(X) } >= 0.\n"));
    EXPECT_EQ(render(out.rules, *out.atoms), "q(1).\nh :- #count { } >= 0.\n");
    // Without an eta instance or elements nothing is derived.
    auto none = ground_program(parse_program("q(1).\nh :- #count { X : p(X) } > 0.\n"));
    EXPECT_EQ(render(none.rules, *none.atoms), "q(1).\n");
}

TEST(GroundComponent, SecondRefinedComponent) {
    Program p = parse_program("u(1). u(2). v(2). v(3).\np(X) :- not q(X), u(X).\nq(X) :- not p(X), v(X).\n");
    auto atoms = std::make_shared<AtomTable>();
    Grounder g(p, atoms);
    AtomSet facts = intern_all(*atoms, "u(1). u(2). v(2). v(3).");
    AtomSet possible = facts | intern_all(*atoms, "p(1). p(2).");
    auto rules = g.ground_component({5}, facts, possible);
    EXPECT_EQ(render(rules, *atoms), "q(2) :- not p(2), v(2).\nq(3) :- not p(3), v(3).\n");
    EXPECT_TRUE(g.ground_component({}, facts, possible).empty());
}

TEST(GroundComponent, CompanyIterations) {
    Program p = parse_program(company);
    auto atoms = std::make_shared<AtomTable>();
    Grounder g(p, atoms);
    AtomSet facts = intern_all(*atoms, company);
    std::size_t iterations = 0;
    auto rules = g.ground_component({0}, facts, facts, &iterations);
    EXPECT_EQ(iterations, 4U);
    EXPECT_EQ(rules.size(), 4U);
    EXPECT_TRUE(names(heads(rules), *atoms).count("controls(c1,c4)"));
}

TEST(GroundProgram, Company) {
    EXPECT_EQ(ground_text(company),
              "company(c1).\ncompany(c2).\ncompany(c3).\ncompany(c4).\n"
              "owns(c1,c2,60).\nowns(c1,c3,20).\nowns(c2,c3,35).\nowns(c3,c4,51).\n"
              "controls(c1,c2) :- #sum+ { 60 : owns(c1,c2,60) } > 50, company(c1), company(c2).\n"
              "controls(c3,c4) :- #sum+ { 51 : owns(c3,c4,51) } > 50, company(c3), company(c4).\n"
              "controls(c1,c3) :- #sum+ { 20 : owns(c1,c3,20); 35,c2 : controls(c1,c2), owns(c2,c3,35) } > 50, "
              "company(c1), company(c3).\n"
              "controls(c1,c4) :- #sum+ { 51,c3 : controls(c1,c3), owns(c3,c4,51) } > 50, company(c1), company(c4).\n");
}

TEST(GroundProgram, InfiniteUniverse) {
    EXPECT_EQ(ground_text("p(a).\np(X) :- p(f(X)).\n"), "p(a).\n");
    auto out = ground_program(parse_program("p(a).\np(X) :- p(f(X)).\nq :- #count { X : p(X) } = 1.\n"));
    EXPECT_EQ(render(strip_certain(out.rules, out.model), *out.atoms), "p(a).\nq.\n");
}

TEST(GroundProgram, DependencyExample) {
    std::string text = "u(1). u(2). v(2). v(3).\np(X) :- not q(X), u(X).\nq(X) :- not p(X), v(X).\n"
                       "x :- not p(1).\ny :- not q(3).\n";
    EXPECT_EQ(ground_text(text), "u(1).\nu(2).\nv(2).\nv(3).\np(1) :- not q(1), u(1).\np(2) :- not q(2), u(2).\n"
                                 "q(2) :- not p(2), v(2).\nq(3) :- not p(3), v(3).\nx :- not p(1).\n");
    auto out = ground_program(parse_program(text));
    ASSERT_EQ(out.trace.size(), 8U);
    EXPECT_EQ(names(out.trace[4].possible, *out.atoms), (Names{"p(1)", "p(2)"}));
    EXPECT_TRUE(out.trace[4].certain.empty());
    EXPECT_EQ(names(out.trace[5].certain, *out.atoms), (Names{"q(3)"}));
    EXPECT_EQ(names(out.trace[5].possible, *out.atoms), (Names{"q(2)", "q(3)"}));
    EXPECT_EQ(names(out.trace[7].possible, *out.atoms), Names{});
}

TEST(GroundProgram, Budget) {
    GrounderOptions opts;
    opts.max_steps = 1000;
    EXPECT_THROW(ground_program(parse_program("p(a).\np(f(X)) :- p(X).\n"), opts), BudgetExhausted);
    EXPECT_NO_THROW(ground_program(parse_program(company), opts));
}

TEST(GroundProgram, UnsafeInputIsRejected) {
    EXPECT_THROW(ground_program(parse_program("p(X) :- not q(X).")), SafetyError);
}

TEST(GroundProgram, Deterministic) {
    ProgramGenerator gen(91);
    for (int k = 0; k < 100; ++k) {
        std::string text = gen.next();
        EXPECT_EQ(ground_text(text), ground_text(text));
    }
}

TEST(GroundProgram, OutputReparses) {
    ProgramGenerator gen(92);
    for (int k = 0; k < 200; ++k) {
        std::string text = gen.next();
        auto out = ground_program(parse_program(text));
        std::string rendered = render(facts_first(out.rules), *out.atoms);
        Program back = parse_program(rendered);
        EXPECT_EQ(back.rules.size(), out.rules.size()) << text;
        EXPECT_EQ(render(back), rendered) << text;
    }
}

TEST(GroundProgram, StratifiedProgramsAreTotal) {
    ProgramGenerator gen(93);
    int checked = 0;
    for (int k = 0; k < 400; ++k) {
        Program p = parse_program(gen.next());
        auto seq = instantiation_sequence(p);
        bool empty_external = std::all_of(seq.components.begin(), seq.components.end(),
                                          [](const Component& c) { return c.external.empty(); });
        if (!empty_external) continue;
        ++checked;
        GrounderOptions plain;
        plain.refine = false;
        auto out = ground_program(p, plain);
        EXPECT_EQ(out.model.certain, out.model.possible);
    }
    EXPECT_GT(checked, 50);
}

TEST(GroundProgram, CorpusMatchesOracle) {
    auto r = run_corpus(95, 150);
    EXPECT_EQ(r.equivalence.mismatches, 0U) << r.equivalence.first_failure;
    EXPECT_EQ(r.precision.mismatches, 0U) << r.precision.first_failure;
}

TEST(GroundProgram, AntimonotoneOverUndecidedAtoms) {
    // p(1) is possible but not certain, so the sum may be 1 and r is not certain.
    auto out = ground_program(parse_program("p(1) :- not s.\ns :- not p(1).\nr :- #sum { W : p(W) } <= 0.\nt :- r.\n"));
    EXPECT_TRUE(out.model.certain.empty());
    EXPECT_EQ(names(out.model.possible, *out.atoms), (Names{"p(1)", "s", "r", "t"}));
    EXPECT_EQ(render(strip_certain(out.rules, out.model), *out.atoms),
              "p(1) :- not s.\ns :- not p(1).\nr :- #sum { 1 : p(1) } <= 0.\nt :- r.\n");
    GrounderOptions plain;
    plain.refine = false;
    auto stratified = ground_program(
        parse_program("r(b) :- #sum { W : p(W) } <= 0, not p(b).\ns :- s, not p(1).\np(1) :- not s, not q(b).\nq(1).\n"),
        plain);
    // The plain sequence leaves p(1) undecided, which must keep r(b) uncertain.
    EXPECT_EQ(names(stratified.model.certain, *stratified.atoms), (Names{"q(1)"}));
    EXPECT_TRUE(names(stratified.model.possible, *stratified.atoms).count("r(b)"));
}
