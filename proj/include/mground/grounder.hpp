// Component-wise grounding of aggregate programs.
#pragma once

#include "mground/aggregates.hpp"
#include "mground/analysis.hpp"
#include "mground/instantiation.hpp"

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>

namespace mground {

// One aggregate occurrence of the component and the auxiliary predicates
// standing for it.
struct AggregateOccurrence {
    std::size_t rule = 0;    // index into the program
    std::size_t literal = 0; // position in the rule body
    Aggregate aggregate;
    std::vector<std::string> globals; // rule-global variables of the aggregate
    std::string alpha;
    std::string eta;
    std::vector<std::string> eps; // one per element
};

struct RewrittenComponent {
    std::vector<Rule> alpha_rules;
    std::vector<std::size_t> alpha_source; // program rule of each alpha rule
    // For each alpha rule and body position: the occurrence replaced there, or npos.
    std::vector<std::vector<std::size_t>> alpha_slots;
    std::vector<Rule> eta_rules;
    std::vector<std::size_t> eta_owner; // occurrence index
    std::vector<Rule> eps_rules;
    std::vector<std::pair<std::size_t, std::size_t>> eps_owner; // (occurrence, element)
    std::vector<AggregateOccurrence> occurrences;
};

// Replaces every aggregate by an atom over a fresh predicate whose arguments
// are the aggregate's global variables, and adds rules deriving its empty-set
// applicability and its element instances. Normal rules pass through.
RewrittenComponent rewrite_aggregates(const Program& p, const std::vector<std::size_t>& rules);

using GlobalKey = std::vector<Term>;

// Ground instances of the auxiliary rules, indexed by occurrence and the
// values of its global variables.
class AuxiliaryInstances {
public:
    void add_eta(std::size_t occurrence, GlobalKey key);
    void add_element(std::size_t occurrence, GlobalKey key, GroundElement element);

    // Whether an empty-set rule instance exists for the assignment.
    bool aggr_empty(std::size_t occurrence, const GlobalKey& key) const;
    // Element instances gathered for the assignment.
    std::vector<GroundElement> aggr_elem(std::size_t occurrence, const GlobalKey& key) const;
    // Assignments with either kind of instance.
    std::set<GlobalKey> keys(std::size_t occurrence) const;

private:
    std::set<std::pair<std::size_t, GlobalKey>> eta_;
    std::map<std::pair<std::size_t, GlobalKey>, std::set<GroundElement>> elements_;
};

struct GrounderOptions {
    EvalOptions eval;
    std::optional<std::size_t> max_steps; // bound on rule instantiation calls
    bool refine = true;                   // use the refined instantiation sequence
};

class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ComponentTrace {
    Component component;
    AtomSet certain;  // heads of the certain pass
    AtomSet possible; // heads of the possible pass
    std::size_t iterations = 0; // loop iterations of the possible pass
};

struct GroundProgramOut {
    std::shared_ptr<AtomTable> atoms;
    GroundProgram rules; // derivation order, no duplicates
    Interp4 model;       // join of the component trace
    std::vector<ComponentTrace> trace;
};

class Grounder {
public:
    Grounder(const Program& p, std::shared_ptr<AtomTable> atoms, GrounderOptions opts = {});

    AtomTable& atoms() { return *atoms_; }

    // Ground α-atoms for the current auxiliary instances.
    AtomSet propagate(const RewrittenComponent& rc, const AuxiliaryInstances& aux, const AtomSet& i,
                      const AtomSet& j);
    // Replaces α-atoms by ground aggregates and comparisons by true.
    GroundProgram assemble(const RewrittenComponent& rc, const std::vector<std::pair<std::size_t, GroundInstance>>& alpha,
                           const AuxiliaryInstances& aux);
    // Ground rules for the component relative to certain atoms `ir` and
    // possible atoms `jr`.
    GroundProgram ground_component(const std::vector<std::size_t>& rules, const AtomSet& ir, const AtomSet& jr,
                                   std::size_t* iterations = nullptr);
    GroundProgramOut ground_program();

private:
    std::vector<GroundInstance> instantiate(const Rule& r, const AtomSet& i, const AtomSet& j, const AtomSet& previous,
                                            bool first, const GroundRuleOptions& opts);

    const Program& program_;
    std::shared_ptr<AtomTable> atoms_;
    GrounderOptions opts_;
    std::size_t steps_ = 0;
};

GroundProgramOut ground_program(const Program& p, const GrounderOptions& opts = {},
                                std::shared_ptr<AtomTable> atoms = nullptr);

// Facts first, otherwise derivation order.
GroundProgram facts_first(const GroundProgram& g);

} // namespace mground
