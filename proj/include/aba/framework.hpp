#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aba/rule.hpp"
#include "aba/syntax.hpp"

namespace aba {

// Flat ABA framework over a finite ground language: normalised rules,
// assumption schemata, a total contrary map, and the constant universe.
// dom(c) facts are implicit and materialised on demand.
struct AbaFramework {
    std::vector<NormalizedRule> rules;
    std::vector<Atom> assumptions;                 // schemata, e.g. votes_dem(X)
    std::map<std::string, std::string> contraries; // assumption pred -> contrary pred
    std::vector<std::string> universe;             // sorted constants

    bool is_assumption_pred(const std::string& p) const { return contraries.count(p) != 0; }

    std::optional<Atom> assumption_schema(const std::string& p) const;
    std::optional<Atom> contrary_of(const Atom& assumption_atom) const;

    // One dom(X) :- X=c fact per universe constant.
    std::vector<NormalizedRule> dom_facts() const;

    // predicate -> arity over rules, assumptions and contraries
    std::map<std::string, int> arities() const;

    bool has_rule(const NormalizedRule& r) const;
    void add_rule(NormalizedRule r);    // keeps the rule list canonically sorted
    void remove_rule(const NormalizedRule& r);
    void add_constants_from(const NormalizedRule& r);

    std::set<std::string> predicates() const;
};

// Background framework, examples and the learnable predicate set.
struct LearningProblem {
    AbaFramework background;
    std::vector<Atom> positives;            // E+
    std::vector<Atom> negatives;            // E-
    std::map<std::string, int> learnables;  // T, predicate -> arity
};

struct Violation {
    enum class Kind {
        Flatness,
        NonTotalContraryMap,
        HeadVariableUnbound,
        ArityClash,
        ContraryIsAssumption,
        UniverseMismatch,
        ExamplesOverlap,
        ExampleNotGround,
        ExampleIsAssumption,
        LearnableIsAssumption,
        ExamplePredicateNotLearnable,
    };
    Kind kind;
    std::string detail;
};

std::string to_string(Violation::Kind k);

// Structural checks: flatness, contrary-map totality, vars(H) within the
// body, arity consistency. Empty result means ok.
std::vector<Violation> validate(const AbaFramework& framework);

// validate() plus the learning-problem side conditions.
std::vector<Violation> validate_problem(const LearningProblem& problem);

} // namespace aba
