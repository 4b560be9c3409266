#include "aba/framework.hpp"

#include <algorithm>

namespace aba {

std::optional<Atom> AbaFramework::assumption_schema(const std::string& p) const {
    for (const auto& a : assumptions)
        if (a.pred == p) return a;
    return std::nullopt;
}

std::optional<Atom> AbaFramework::contrary_of(const Atom& assumption_atom) const {
    auto it = contraries.find(assumption_atom.pred);
    if (it == contraries.end()) return std::nullopt;
    return Atom{it->second, assumption_atom.args};
}

std::vector<NormalizedRule> AbaFramework::dom_facts() const {
    std::vector<NormalizedRule> out;
    out.reserve(universe.size());
    for (const auto& c : universe) {
        NormalizedRule r;
        r.head = Atom{std::string(kDomPred), {Term::variable("X1")}};
        r.equalities = {{Term::variable("X1"), Term::constant(c)}};
        out.push_back(std::move(r));
    }
    return out;
}

std::map<std::string, int> AbaFramework::arities() const {
    std::map<std::string, int> out;
    auto note = [&out](const Atom& a) {
        auto it = out.find(a.pred);
        if (it == out.end()) out[a.pred] = a.arity();
    };
    for (const auto& r : rules) {
        note(r.head);
        for (const auto& a : r.body) note(a);
    }
    for (const auto& a : assumptions) {
        note(a);
        out.emplace(contraries.at(a.pred), a.arity());
    }
    return out;
}

bool AbaFramework::has_rule(const NormalizedRule& r) const {
    std::string key = canonical_key(r);
    for (const auto& rr : rules)
        if (canonical_key(rr) == key) return true;
    return false;
}

void AbaFramework::add_rule(NormalizedRule r) {
    if (has_rule(r)) return;
    add_constants_from(r);
    rules.push_back(std::move(r));
    sort_canonically(rules);
}

void AbaFramework::remove_rule(const NormalizedRule& r) {
    std::string key = canonical_key(r);
    std::erase_if(rules, [&key](const NormalizedRule& rr) { return canonical_key(rr) == key; });
}

void AbaFramework::add_constants_from(const NormalizedRule& r) {
    for (const auto& e : r.equalities) {
        for (const Term* t : {&e.lhs, &e.rhs}) {
            if (t->is_const() && !std::binary_search(universe.begin(), universe.end(), t->name)) {
                universe.push_back(t->name);
                std::sort(universe.begin(), universe.end());
            }
        }
    }
}

std::set<std::string> AbaFramework::predicates() const {
    std::set<std::string> out;
    for (const auto& [p, n] : arities()) out.insert(p);
    return out;
}

std::string to_string(Violation::Kind k) {
    switch (k) {
    case Violation::Kind::Flatness: return "FlatnessViolation";
    case Violation::Kind::NonTotalContraryMap: return "NonTotalContraryMap";
    case Violation::Kind::HeadVariableUnbound: return "HeadVariableUnbound";
    case Violation::Kind::ArityClash: return "ArityClash";
    case Violation::Kind::ContraryIsAssumption: return "ContraryIsAssumption";
    case Violation::Kind::UniverseMismatch: return "UniverseMismatch";
    case Violation::Kind::ExamplesOverlap: return "ExamplesOverlap";
    case Violation::Kind::ExampleNotGround: return "ExampleNotGround";
    case Violation::Kind::ExampleIsAssumption: return "ExampleIsAssumption";
    case Violation::Kind::LearnableIsAssumption: return "LearnableIsAssumption";
    case Violation::Kind::ExamplePredicateNotLearnable: return "ExamplePredicateNotLearnable";
    }
    return "Unknown";
}

std::vector<Violation> validate(const AbaFramework& framework) {
    std::vector<Violation> out;
    std::map<std::string, int> arity;
    auto check_arity = [&](const Atom& a, const std::string& where) {
        auto [it, inserted] = arity.emplace(a.pred, a.arity());
        if (!inserted && it->second != a.arity())
            out.push_back({Violation::Kind::ArityClash,
                           a.pred + " used with arity " + std::to_string(a.arity()) + " and " +
                               std::to_string(it->second) + " (" + where + ")"});
    };

    for (const auto& r : framework.rules) {
        check_arity(r.head, to_string(r));
        for (const auto& a : r.body) check_arity(a, to_string(r));
        if (framework.is_assumption_pred(r.head.pred))
            out.push_back({Violation::Kind::Flatness,
                           "assumption " + r.head.pred + " is the head of " + to_string(r)});
        // vars(H) must be bound by the body
        std::set<std::string> bound = vars_of(r.body);
        for (const auto& e : r.equalities) {
            if (e.lhs.is_var()) bound.insert(e.lhs.name);
            if (e.rhs.is_var()) bound.insert(e.rhs.name);
        }
        for (const auto& v : vars_of(r.head))
            if (!bound.count(v))
                out.push_back({Violation::Kind::HeadVariableUnbound, v + " in " + to_string(r)});
    }

    for (const auto& a : framework.assumptions) {
        check_arity(a, "assumption " + to_string(a));
        auto it = framework.contraries.find(a.pred);
        if (it == framework.contraries.end()) {
            out.push_back({Violation::Kind::NonTotalContraryMap, a.pred + " has no contrary"});
            continue;
        }
        if (framework.is_assumption_pred(it->second))
            out.push_back({Violation::Kind::ContraryIsAssumption,
                           "contrary of " + a.pred + " is assumption " + it->second});
        check_arity(Atom{it->second, a.args}, "contrary of " + a.pred);
    }

    // every constant mentioned by a rule must be in the universe
    for (const auto& r : framework.rules)
        for (const auto& e : r.equalities)
            for (const Term* t : {&e.lhs, &e.rhs})
                if (t->is_const() &&
                    !std::binary_search(framework.universe.begin(), framework.universe.end(), t->name))
                    out.push_back({Violation::Kind::UniverseMismatch,
                                   t->name + " not in the universe (" + to_string(r) + ")"});
    return out;
}

std::vector<Violation> validate_problem(const LearningProblem& problem) {
    std::vector<Violation> out = validate(problem.background);
    const auto& bg = problem.background;

    for (const auto& e : problem.positives)
        for (const auto& n : problem.negatives)
            if (e == n)
                out.push_back({Violation::Kind::ExamplesOverlap, to_string(e)});

    auto check_example = [&](const Atom& e) {
        if (!e.ground())
            out.push_back({Violation::Kind::ExampleNotGround, to_string(e)});
        if (bg.is_assumption_pred(e.pred))
            out.push_back({Violation::Kind::ExampleIsAssumption, to_string(e)});
        if (!problem.learnables.count(e.pred))
            out.push_back({Violation::Kind::ExamplePredicateNotLearnable, to_string(e)});
    };
    for (const auto& e : problem.positives) check_example(e);
    for (const auto& e : problem.negatives) check_example(e);

    for (const auto& [p, n] : problem.learnables)
        if (bg.is_assumption_pred(p))
            out.push_back({Violation::Kind::LearnableIsAssumption, p});
    return out;
}

} // namespace aba
