#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "aba/framework.hpp"

namespace aba {

// Argumentation-level semantics computed independently of the ASP path:
// used as ground truth when verifying the solver, the encoding and the
// learner. Exhaustive over assumption subsets, so instances are bounded.

struct Extension {
    std::vector<Atom> assumptions_in; // ground assumptions of the extension
    std::vector<Atom> claims;         // every derivable claim, assumptions included
};

struct OracleOptions {
    int max_ground_assumptions = 24;
};

// Ground claims mapped to their subset-minimal assumption supports.
std::map<Atom, std::vector<std::vector<Atom>>>
supports(const AbaFramework& framework, const OracleOptions& opts = {});

// All stable extensions: conflict-free assumption sets deriving the contrary
// of every excluded assumption. Throws AssumptionBoundExceeded past the
// enumeration bound.
std::vector<Extension> stable_extensions(const AbaFramework& framework,
                                         const OracleOptions& opts = {});

// True iff some stable extension claims every positive example and no
// negative one; the witness is returned when present.
bool bravely_entails(const AbaFramework& framework,
                     const std::vector<Atom>& positives,
                     const std::vector<Atom>& negatives,
                     Extension* witness = nullptr,
                     const OracleOptions& opts = {});

// Definition-style solution check of a candidate framework against a
// learning problem: rule inclusion, learnable head predicates, assumption
// and contrary preservation, and brave entailment of the examples.
bool is_solution(const AbaFramework& candidate, const LearningProblem& problem,
                 std::string* why = nullptr, const OracleOptions& opts = {});

// Arguments as (claim, exact assumption support) pairs, enumerated by
// fixpoint; support_cap bounds the pair count. Used to cross-check the
// assumption-level semantics against the argument-level definition.
struct ExactArgument {
    Atom claim;
    std::vector<Atom> support;
};
std::vector<ExactArgument> exact_arguments(const AbaFramework& framework, size_t cap = 20000);

// Stable extensions per the argument-level definition, by exhaustive
// enumeration over argument subsets; claim sets returned. Only feasible for
// tiny frameworks (throws past max_arguments).
std::vector<std::vector<Atom>>
argument_level_stable_claim_sets(const AbaFramework& framework, size_t max_arguments = 16);

} // namespace aba
