#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aba/syntax.hpp"

namespace aba {

// Rule in normalised form: constants live only in the equality part, head and
// body atoms carry variables only. A ground fact p(t) is stored as
// p(X1,..,Xn) with equalities Xi=ti and an empty body.
struct NormalizedRule {
    Atom head;
    std::vector<Equality> equalities;
    std::vector<Atom> body;
    std::string label; // optional rho-name, ignored by comparisons

    bool operator==(const NormalizedRule& o) const {
        return head == o.head && equalities == o.equalities && body == o.body;
    }
};

// Pre-normalisation rule as read from input; atoms may contain constants.
struct RawRule {
    Atom head;
    std::vector<Equality> equalities;
    std::vector<Atom> body;
    std::string label;
};

// Congruence closure of an equality multiset over a rule body.
class EqConstraint {
public:
    EqConstraint() = default;
    explicit EqConstraint(const std::vector<Equality>& eqs);

    void merge(const Term& a, const Term& b);

    // Two distinct constants forced equal; a body with a contradictory
    // constraint has no ground instances.
    bool contradictory() const { return contradictory_; }

    bool entails(const Equality& e) const;
    bool entails_all(const std::vector<Equality>& es) const;

    // Constant bound to the variable's class, if any.
    std::optional<std::string> constant_of(const std::string& var) const;

    // Minimal canonical equality list restricted to `keep_vars`. Classes with
    // no kept variable are dropped (existentially true over a non-empty
    // universe). Returns the original list unchanged when contradictory.
    std::vector<Equality> restricted_canonical(const std::set<std::string>& keep_vars,
                                               const std::vector<Equality>& fallback) const;

    // Canonical residual such that `consumed` together with the result is
    // equivalent to this constraint. Preconditions: every member of
    // `consumed` is entailed.
    std::vector<Equality> residual_after(const std::vector<Equality>& consumed) const;

    std::set<std::string> constants() const;
    std::set<std::string> variables() const;

private:
    std::string find(const std::string& key) const;
    // keys: "v:" + name for variables, "c:" + name for constants
    mutable std::map<std::string, std::string> parent_;
    bool contradictory_ = false;

    friend std::vector<Equality> canonical_class_links(const EqConstraint&,
                                                       const std::set<std::string>&);
};

// Factor every constant occurring in head or body atoms out into a fresh
// X<n> equality, then canonicalise the equality part. Throws
// FlatnessViolation when the head predicate is an assumption.
NormalizedRule normalize(const RawRule& rule, const std::set<std::string>& assumption_preds = {});

// True iff the rule mentions no constants at all.
bool is_intensional(const NormalizedRule& rule);

std::set<std::string> rule_variables(const NormalizedRule& rule);
std::set<std::string> vars_of(const Atom& a);
std::set<std::string> vars_of(const std::vector<Atom>& atoms);

// Rewrites a normalised body so that `goal` is syntactically present,
// preserving the set of ground solutions; nullopt when no equivalent body
// contains the goal.
struct RuleBody {
    std::vector<Equality> equalities;
    std::vector<Atom> atoms;
};
std::optional<RuleBody> equality_rewrite(const RuleBody& body, const Equality& goal);

std::string to_string(const NormalizedRule& rule);

// Alpha-invariant key: variables renamed V1,V2,... by first occurrence in
// head, equalities, body. Used for rule identity and canonical ordering.
std::string canonical_key(const NormalizedRule& rule);

void sort_canonically(std::vector<NormalizedRule>& rules);
bool same_rule(const NormalizedRule& a, const NormalizedRule& b);

} // namespace aba
