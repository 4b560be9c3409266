#pragma once

#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "aba/encoding.hpp"
#include "aba/framework.hpp"

namespace aba {

// Answer-set backend: yields optimal answer sets first, deterministically.
using SolveBackend = std::function<std::vector<AnswerSet>(const AspProgram&, size_t limit)>;
SolveBackend internal_backend();

enum class LearnMode { B, BE };

struct LearnerOptions {
    LearnMode mode = LearnMode::B;
    size_t answer_set_cap = 64; // optimal alternatives explored per choice point
    bool paranoid_checks = false; // oracle-check the loop invariant (slow)
    EncodingOptions rote_encoding{};
    // footnote guard for the fresh-contrary call; exact there because the new
    // assumption occurs in exactly one rule
    bool restrict_contrary_domain = true;
    SolveBackend backend; // defaults to the internal solver
};

struct TraceRecord {
    std::string kind; // R1..R4 or a bookkeeping note
    std::string rule;
    std::string detail;
};

struct LearnStats {
    size_t solver_calls = 0;
    size_t folds = 0;
    size_t backtracks = 0;
    long wall_ms = 0;
};

struct LearnOutcome {
    enum class Status { Success, Failure, NoSolution };
    Status status = Status::Failure;
    AbaFramework framework;     // on success
    bool intensional = false;   // every learned rule free of constants
    std::vector<Atom> rote_facts; // facts added by the successful RoLe branch
    std::vector<TraceRecord> trace;
    LearnStats stats;
    std::string detail;

    bool success() const { return status == Status::Success; }
};

// The two-phase learning loop: rote-learn a minimal fact set, then
// generalise each fact by folding, assumption introduction and fact
// subsumption, backtracking depth-first over answer sets, relative
// assumptions and fold sequences.
LearnOutcome learn(const LearningProblem& problem, const LearnerOptions& opts = {});

// New rules relative to a background; helper shared by learner and CLI.
std::vector<NormalizedRule> new_rules(const AbaFramework& result, const AbaFramework& background);

} // namespace aba
