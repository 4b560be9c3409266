#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aba/framework.hpp"

namespace aba {

// A rule usable as a folder, tagged with where it came from. Background
// rules are preferred over learned facts; implicit dom facts come last.
struct FolderRule {
    NormalizedRule rule;
    enum class Origin { Background, Learned, Dom } origin = Origin::Background;
};

struct FoldCandidate {
    NormalizedRule folded;          // the resulting rule
    FolderRule folder;
    std::vector<Equality> consumed; // Eqs1: matched equalities of the target
    Atom folder_head_instance;      // K under the match renaming
};

// Adds the ground atom as a normalised fact p(X) :- X=t.
NormalizedRule rote_learn(const Atom& atom, const std::set<std::string>& assumption_preds = {});

// All ways of folding `target` using a distinct rule of the rulebase:
// a sub-multiset of the target's atoms matches the folder's atoms under an
// injective renaming, the folder's equalities are entailed by the target's,
// and the result replaces the matched part with the folder's head.
// Candidates are ranked background-first, then by residual equality count,
// then canonically.
std::vector<FoldCandidate> fold_candidates(const NormalizedRule& target,
                                           const std::vector<FolderRule>& rulebase);

// Accumulated body closure of a fold sequence, used to bound the search.
struct FoldTrace {
    struct Step {
        NormalizedRule before;
        NormalizedRule folder;
        NormalizedRule after;
    };
    std::vector<Step> steps;
    std::set<std::string> atom_closure; // canonical per-atom keys of body atoms + folder heads
    std::vector<Equality> eq_closure;

    size_t bound = 0; // steps may not exceed this

    static FoldTrace start(const NormalizedRule& rule, const std::vector<FolderRule>& rulebase,
                           size_t universe_size);
    bool admits(const FoldCandidate& cand) const;
    void push(const FoldCandidate& cand, const NormalizedRule& before);
};

// applyFolding: folds while the rule is non-intensional, exploring candidate
// sequences depth-first. `sink` receives each intensional result; returning
// true stops the search (a downstream success). In enumerating mode the
// original rule itself is offered after all sequences fail.
enum class FoldMode { Bounded, Enumerating };
struct FoldStats {
    size_t folds = 0;
    size_t dead_ends = 0;
};
bool apply_folding(const NormalizedRule& rule, const std::vector<FolderRule>& rulebase,
                   size_t universe_size, FoldMode mode,
                   const std::function<bool(const NormalizedRule&, const FoldTrace&)>& sink,
                   FoldStats* stats = nullptr);

// Single deterministic run used by tests: first admissible candidate at each
// step; returns the intensional rule and its trace.
std::pair<NormalizedRule, FoldTrace>
apply_folding_first(const NormalizedRule& rule, const std::vector<FolderRule>& rulebase,
                    size_t universe_size);

// R3: make a rule defeasible by appending an assumption over the given
// variable tuple, updating the framework's assumption set and contrary map.
struct AsmIntroResult {
    AbaFramework framework;
    NormalizedRule rule;
    Atom assumption; // schema instance appended to the rule body
    Atom contrary;
};
AsmIntroResult introduce_assumption(const AbaFramework& framework, const NormalizedRule& rule,
                                    const std::vector<Term>& var_tuple,
                                    const std::string& asm_pred,
                                    const std::string& contrary_pred);

// R4 relative to the examples: drop the fact when the remainder still
// bravely entails them. The test runs through the ASP encoding.
struct SubsumeResult {
    bool removed = false;
    AbaFramework framework;
};
SubsumeResult subsume_fact(const AbaFramework& framework, const std::vector<Atom>& positives,
                           const std::vector<Atom>& negatives, const NormalizedRule& fact);

// Definition-level helper: assumptions alpha(X) relative to a body B, i.e.
// some rule H :- B, alpha(X) exists in the rulebase (modulo renaming).
std::vector<Atom> relative_assumptions(const std::vector<NormalizedRule>& rules,
                                       const AbaFramework& framework,
                                       const NormalizedRule& folded);

} // namespace aba
