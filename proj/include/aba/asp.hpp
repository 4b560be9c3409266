#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aba/syntax.hpp"

namespace aba {

// ASP fragment: normal rules with negation as failure, integrity
// constraints, choice rules with a single head schema (or an enumerated
// ground head list), and one weight-1 minimise objective.
struct AspRule {
    enum class Kind { Normal, Constraint, Choice };

    Kind kind = Kind::Normal;
    std::optional<Atom> head;          // Normal only
    std::vector<Atom> choice_heads;    // Choice: one schema, or enumerated ground atoms
    std::vector<Atom> pos_body;
    std::vector<Atom> naf_body;
    std::vector<Equality> equalities;  // grounding-time constraints

    static AspRule fact(Atom a);
    static AspRule normal(Atom head, std::vector<Atom> pos, std::vector<Atom> naf = {},
                          std::vector<Equality> eqs = {});
    static AspRule constraint(std::vector<Atom> pos, std::vector<Atom> naf = {},
                              std::vector<Equality> eqs = {});
    static AspRule choice(std::vector<Atom> heads, std::vector<Atom> guard = {});
};

struct AspProgram {
    std::vector<AspRule> rules;
    std::vector<std::string> minimize_preds; // weight 1 per true instance
    std::vector<std::string> universe;
};

struct GroundRule {
    int head = -1; // -1 for constraints
    std::vector<int> pos;
    std::vector<int> naf;
};

struct GroundAspProgram {
    std::vector<Atom> atoms;          // index -> atom, canonical order
    std::map<Atom, int> index;
    std::vector<GroundRule> rules;
    std::vector<int> minimize_atoms;  // sorted indices

    int intern(const Atom& a);
    std::optional<int> lookup(const Atom& a) const;
    bool is_internal(int idx) const { return is_internal_pred(atoms[idx].pred); }
};

struct AnswerSet {
    std::vector<Atom> atoms; // canonical order, internal atoms excluded
    int cost = 0;

    bool contains(const Atom& a) const;
};

// Grounds by substituting universe constants for variables; equalities are
// resolved at grounding time and never become atoms. Choice rules are
// compiled to complement pairs p :- G, not __not_p / __not_p :- G, not p.
// Throws RangeRestrictionError for a variable not bound by a positive body
// atom or an equality.
GroundAspProgram ground(const AspProgram& program);

} // namespace aba
