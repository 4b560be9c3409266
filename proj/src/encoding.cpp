#include "aba/encoding.hpp"

#include <algorithm>
#include <set>

namespace aba {

namespace {

std::vector<Term> schema_vars(int arity) {
    std::vector<Term> out;
    out.reserve(arity);
    for (int i = 0; i < arity; ++i) out.push_back(Term::variable("X" + std::to_string(i + 1)));
    return out;
}

std::vector<Atom> dom_guard(const std::vector<Term>& vars) {
    std::vector<Atom> out;
    std::set<std::string> seen;
    for (const auto& v : vars)
        if (v.is_var() && seen.insert(v.name).second)
            out.push_back(Atom{std::string(kDomPred), {v}});
    return out;
}

// assumption predicates that occur in some rule body
std::set<std::string> assumptions_in_rules(const AbaFramework& fw) {
    std::set<std::string> out;
    for (const auto& r : fw.rules)
        for (const auto& a : r.body)
            if (fw.is_assumption_pred(a.pred)) out.insert(a.pred);
    return out;
}

} // namespace

AspProgram translate_framework(const AbaFramework& framework) {
    AspProgram prog;
    prog.universe = framework.universe;

    // (a) the rules, assumption atoms staying in positive bodies
    for (const auto& r : framework.rules)
        prog.rules.push_back(AspRule::normal(r.head, r.body, {}, r.equalities));

    // dom(c) facts for the whole universe
    for (const auto& c : framework.universe)
        prog.rules.push_back(AspRule::fact(Atom{std::string(kDomPred), {Term::constant(c)}}));

    // (b) alpha :- dom(X), not c_alpha for every assumption occurring in R
    for (const auto& p : assumptions_in_rules(framework)) {
        Atom schema = *framework.assumption_schema(p);
        Atom alpha{p, schema_vars(schema.arity())};
        Atom contrary{framework.contraries.at(p), alpha.args};
        prog.rules.push_back(AspRule::normal(alpha, dom_guard(alpha.args), {contrary}));
    }
    return prog;
}

AspProgram encode_entailment(const AbaFramework& framework,
                             const std::vector<Atom>& positives,
                             const std::vector<Atom>& negatives) {
    AspProgram prog = translate_framework(framework);
    for (const auto& e : positives) prog.rules.push_back(AspRule::constraint({}, {e}));
    for (const auto& e : negatives) prog.rules.push_back(AspRule::constraint({e}, {}));
    return prog;
}

AspProgram encode_learning(const AbaFramework& framework,
                           const std::vector<Atom>& positives,
                           const std::vector<Atom>& negatives,
                           const std::map<std::string, int>& learnables,
                           const EncodingOptions& opts) {
    AspProgram prog = encode_entailment(framework, positives, negatives);

    std::set<std::string> pos_preds;
    for (const auto& e : positives) pos_preds.insert(e.pred);

    for (const auto& [p, arity] : learnables) {
        if (framework.is_assumption_pred(p))
            throw EncodingError("learnable predicate is an assumption: " + p);

        Atom primed_schema{primed(p), schema_vars(arity)};
        Atom plain{p, primed_schema.args};
        prog.rules.push_back(AspRule::normal(plain, {primed_schema}));
        prog.minimize_preds.push_back(primed_schema.pred);

        if (opts.positive_example_choice_simplification && pos_preds.count(p)) {
            std::vector<Atom> heads;
            for (const auto& e : positives)
                if (e.pred == p) heads.push_back(Atom{primed_schema.pred, e.args});
            std::sort(heads.begin(), heads.end());
            heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
            prog.rules.push_back(AspRule::choice(heads));
            continue;
        }

        std::vector<Atom> guard;
        if (opts.domain_restriction) {
            // applies when p is the contrary of an assumption occurring in
            // exactly one rule body: guard with that body's connected
            // non-assumption atoms
            std::string asm_pred;
            for (const auto& [ap, cp] : framework.contraries)
                if (cp == p) asm_pred = ap;
            if (!asm_pred.empty()) {
                const NormalizedRule* host = nullptr;
                const Atom* occurrence = nullptr;
                int occurrences = 0;
                for (const auto& r : framework.rules)
                    for (const auto& b : r.body)
                        if (b.pred == asm_pred) {
                            ++occurrences;
                            host = &r;
                            occurrence = &b;
                        }
                if (occurrences == 1) {
                    Atom choice_head{primed_schema.pred, occurrence->args};
                    std::set<std::string> tuple_vars = vars_of(*occurrence);
                    std::set<std::string> covered;
                    std::vector<Atom> conn;
                    for (const auto& b : host->body) {
                        if (&b == occurrence || framework.is_assumption_pred(b.pred)) continue;
                        auto bv = vars_of(b);
                        bool connected = false;
                        for (const auto& v : bv)
                            if (tuple_vars.count(v)) connected = true;
                        if (connected) {
                            conn.push_back(b);
                            covered.insert(bv.begin(), bv.end());
                        }
                    }
                    for (const auto& v : tuple_vars)
                        if (!covered.count(v))
                            conn.push_back(Atom{std::string(kDomPred), {Term::variable(v)}});
                    prog.rules.push_back(AspRule::choice({choice_head}, conn));
                    continue;
                }
            }
        }
        prog.rules.push_back(AspRule::choice({primed_schema}, dom_guard(primed_schema.args)));
    }
    return prog;
}

std::vector<NormalizedRule> decode_facts(const AnswerSet& answer,
                                         const std::map<std::string, int>& learnables) {
    std::vector<NormalizedRule> out;
    for (const auto& a : answer.atoms) {
        if (!is_primed(a.pred)) continue;
        std::string base = unprimed(a.pred);
        if (!learnables.count(base)) continue;
        RawRule raw;
        raw.head = Atom{base, a.args};
        out.push_back(normalize(raw));
    }
    sort_canonically(out);
    return out;
}

} // namespace aba
