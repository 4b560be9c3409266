#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "aba/asp.hpp"

namespace aba {

// Enumerates answer sets of a ground program. Deterministic: atoms are
// branched in table order, false branch first. With a minimise objective
// only cost-optimal answer sets are yielded (the search runs twice: once to
// establish the optimum, once to enumerate at that bound).
std::vector<AnswerSet> answer_sets(const GroundAspProgram& ground, size_t limit);

std::vector<AnswerSet> answer_sets(const AspProgram& program, size_t limit);

// Satisfiability; the minimise directive plays no role here.
bool is_satisfiable(const GroundAspProgram& ground);
bool is_satisfiable(const AspProgram& program);

// Gelfond-Lifschitz test: candidate equals the least model of the reduct and
// violates no constraint. Candidates range over the compiled atom table
// (complement atoms of choice rules included).
bool check_stable_model(const GroundAspProgram& ground, const std::set<int>& candidate);
bool check_stable_model(const GroundAspProgram& ground, const std::vector<Atom>& candidate);

// Materialises a model as a user-facing answer set (internal atoms dropped).
AnswerSet materialize(const GroundAspProgram& ground, const std::vector<char>& model);

} // namespace aba
