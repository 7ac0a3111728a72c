// Matching and instantiation of normal rules.
#pragma once

#include "mground/analysis.hpp"
#include "mground/ground.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mground {

class Substitution {
public:
    const Term* lookup(const std::string& var) const;
    bool binds(const std::string& var) const { return map_.count(var) != 0; }
    // Returns false and leaves the map untouched if `var` is bound differently.
    bool bind(const std::string& var, const Term& value);
    std::size_t size() const { return map_.size(); }
    const std::map<std::string, Term>& bindings() const { return map_; }

    Term apply(const Term& t) const;
    Atom apply(const Atom& a) const;
    Comparison apply(const Comparison& c) const;

    friend bool operator==(const Substitution&, const Substitution&) = default;
    friend auto operator<=>(const Substitution&, const Substitution&) = default;

private:
    std::map<std::string, Term> map_;
};

// Extends sigma so that pattern becomes equal to the ground term.
bool match_into(const Term& pattern, const Term& ground, Substitution& sigma);
// The matcher from pattern to the ground atom, if any.
std::optional<Substitution> match(const Atom& pattern, const Atom& ground);

// Which atoms of J a positive literal may be matched against.
enum class MatchScope : std::uint8_t { All, Delta };

// Extensions of sigma under which the literal holds: positive atoms are matched
// against J (or J minus `previous` for the delta scope); negative literals and
// comparisons must be ground under sigma and are tested against I directly.
std::vector<Substitution> matches(const BodyLiteral& l, const AtomTable& table, const AtomSet& i, const AtomSet& j,
                                  const Substitution& sigma, MatchScope scope = MatchScope::All,
                                  const AtomSet* previous = nullptr);

// Index into `body` of the literal to match next among `remaining`: a ground
// comparison or negative literal, else a positive atom over a recursive
// predicate, else the positive atom binding the most variables.
std::size_t select(const Substitution& sigma, const std::vector<BodyLiteral>& body,
                   const std::vector<std::size_t>& remaining, const PredicateSet& recursive);

struct GroundLiteral {
    enum class Kind : std::uint8_t { Positive, Negative, Comparison };
    Kind kind = Kind::Positive;
    AtomId atom = 0; // unused for comparisons
    friend auto operator<=>(const GroundLiteral&, const GroundLiteral&) = default;
};

struct GroundInstance {
    AtomId head = 0;
    std::vector<GroundLiteral> body; // in the order of the rule body
    Substitution sigma;
};

struct GroundRuleOptions {
    PredicateSet recursive;
    // Set when every atom of J outside J' is over a recursive predicate; rules
    // with a single recursive positive literal then only match it against J
    // minus J'.
    bool delta = false;
};

// Instances of a normal rule whose bodies hold in J under the reduct with
// respect to I. Unless `first` is set, instances whose positive body lies
// entirely in `previous` are skipped.
std::vector<GroundInstance> ground_rule(const Rule& r, AtomTable& table, const AtomSet& i, const AtomSet& j,
                                        const AtomSet& previous, bool first, const GroundRuleOptions& opts = {},
                                        const Substitution& sigma = {});

} // namespace mground
