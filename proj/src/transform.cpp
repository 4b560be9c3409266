#include "aba/transform.hpp"

#include <algorithm>
#include <cassert>
#include <map>

#include "aba/encoding.hpp"
#include "aba/solver.hpp"

namespace aba {

NormalizedRule rote_learn(const Atom& atom, const std::set<std::string>& assumption_preds) {
    RawRule raw;
    raw.head = atom;
    return normalize(raw, assumption_preds);
}

namespace {

// per-atom canonical key: variables numbered by first occurrence inside the atom
std::string atom_instance_key(const Atom& a) { return to_string(a); }

using VarMap = std::map<std::string, std::string>; // folder var -> target var

bool map_var(VarMap& sigma, std::set<std::string>& images, const std::string& from,
             const std::string& to) {
    auto it = sigma.find(from);
    if (it != sigma.end()) return it->second == to;
    if (images.count(to)) return false; // injective
    sigma.emplace(from, to);
    images.insert(to);
    return true;
}

Atom apply_map(const Atom& a, const VarMap& sigma) {
    Atom out{a.pred, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args)
        out.args.push_back(t.is_var() ? Term::variable(sigma.at(t.name)) : t);
    return out;
}

struct Matcher {
    const NormalizedRule& target;
    const NormalizedRule& folder;
    std::vector<std::string> target_vars;

    template <typename Fn>
    void enumerate(const Fn& fn) const {
        VarMap sigma;
        std::set<std::string> images;
        std::vector<char> used(target.body.size(), 0);
        std::vector<int> picks;
        match_atom(0, sigma, images, used, picks, fn);
    }

    template <typename Fn>
    void match_atom(size_t fi, VarMap sigma, std::set<std::string> images, std::vector<char> used,
                    std::vector<int> picks, const Fn& fn) const {
        if (fi == folder.body.size()) {
            // images for folder variables live only in the equality part / head
            std::vector<std::string> rest;
            for (const auto& v : folder_vars_)
                if (!sigma.count(v)) rest.push_back(v);
            assign_rest(0, rest, std::move(sigma), std::move(images), std::move(used),
                        std::move(picks), fn);
            return;
        }
        const Atom& fa = folder.body[fi];
        for (size_t ti = 0; ti < target.body.size(); ++ti) {
            if (used[ti]) continue;
            const Atom& ta = target.body[ti];
            if (ta.pred != fa.pred || ta.args.size() != fa.args.size()) continue;
            VarMap s2 = sigma;
            std::set<std::string> im2 = images;
            bool ok = true;
            for (size_t k = 0; k < fa.args.size() && ok; ++k) {
                const Term& ft = fa.args[k];
                const Term& tt = ta.args[k];
                if (ft.is_const() || tt.is_const())
                    ok = ft == tt;
                else
                    ok = map_var(s2, im2, ft.name, tt.name);
            }
            if (!ok) continue;
            auto u2 = used;
            u2[ti] = 1;
            auto p2 = picks;
            p2.push_back(static_cast<int>(ti));
            match_atom(fi + 1, std::move(s2), std::move(im2), std::move(u2), std::move(p2), fn);
        }
    }

    template <typename Fn>
    void assign_rest(size_t ri, const std::vector<std::string>& rest, VarMap sigma,
                     std::set<std::string> images, std::vector<char> used, std::vector<int> picks,
                     const Fn& fn) const {
        if (ri == rest.size()) {
            fn(sigma, used, picks);
            return;
        }
        for (const auto& tv : target_vars) {
            VarMap s2 = sigma;
            std::set<std::string> im2 = images;
            if (!map_var(s2, im2, rest[ri], tv)) continue;
            assign_rest(ri + 1, rest, std::move(s2), std::move(im2), used, picks, fn);
        }
    }

    std::vector<std::string> folder_vars_;
};

} // namespace

std::vector<FoldCandidate> fold_candidates(const NormalizedRule& target,
                                           const std::vector<FolderRule>& rulebase) {
    std::vector<FoldCandidate> out;
    EqConstraint eq1(target.equalities);
    std::string target_key = canonical_key(target);
    std::set<std::string> target_var_set = rule_variables(target);
    std::vector<std::string> target_vars(target_var_set.begin(), target_var_set.end());
    std::set<std::string> dedupe;

    for (const auto& folder : rulebase) {
        if (canonical_key(folder.rule) == target_key) continue; // rules must be distinct

        Matcher m{target, folder.rule, target_vars, {}};
        auto fv = rule_variables(folder.rule);
        m.folder_vars_.assign(fv.begin(), fv.end());

        m.enumerate([&](const VarMap& sigma, const std::vector<char>& used,
                        const std::vector<int>&) {
            // the folder's equalities must be entailed by the target's
            std::vector<Equality> consumed;
            consumed.reserve(folder.rule.equalities.size());
            for (const auto& e : folder.rule.equalities) {
                Equality ge{e.lhs.is_var() ? Term::variable(sigma.at(e.lhs.name)) : e.lhs,
                            e.rhs.is_var() ? Term::variable(sigma.at(e.rhs.name)) : e.rhs};
                if (!eq1.entails(ge)) return;
                consumed.push_back(std::move(ge));
            }

            NormalizedRule folded;
            folded.head = target.head;
            folded.body.push_back(apply_map(folder.rule.head, sigma));
            for (size_t ti = 0; ti < target.body.size(); ++ti)
                if (!used[ti]) folded.body.push_back(target.body[ti]);
            std::sort(folded.body.begin(), folded.body.end());

            std::vector<Equality> residual = eq1.residual_after(consumed);
            std::set<std::string> keep = vars_of(folded.head);
            auto bv = vars_of(folded.body);
            keep.insert(bv.begin(), bv.end());
            folded.equalities = EqConstraint(residual).restricted_canonical(keep, residual);

            // head variables must stay bound
            std::set<std::string> bound = vars_of(folded.body);
            for (const auto& e : folded.equalities) {
                if (e.lhs.is_var()) bound.insert(e.lhs.name);
                if (e.rhs.is_var()) bound.insert(e.rhs.name);
            }
            for (const auto& v : vars_of(folded.head))
                if (!bound.count(v)) return;

            FoldCandidate cand;
            cand.folded = std::move(folded);
            cand.folder = folder;
            cand.consumed = std::move(consumed);
            cand.folder_head_instance = apply_map(folder.rule.head, sigma);
            std::string key = canonical_key(cand.folded) + "//" + canonical_key(folder.rule) +
                              "//" + to_string(cand.folder_head_instance);
            if (dedupe.insert(key).second) out.push_back(std::move(cand));
        });
    }

    auto tier = [](FolderRule::Origin o) {
        switch (o) {
        case FolderRule::Origin::Background: return 0;
        case FolderRule::Origin::Learned: return 1;
        case FolderRule::Origin::Dom: return 2;
        }
        return 3;
    };
    std::stable_sort(out.begin(), out.end(), [&](const FoldCandidate& a, const FoldCandidate& b) {
        int ta = tier(a.folder.origin), tb = tier(b.folder.origin);
        if (ta != tb) return ta < tb;
        if (a.folded.equalities.size() != b.folded.equalities.size())
            return a.folded.equalities.size() < b.folded.equalities.size();
        auto ka = canonical_key(a.folded), kb = canonical_key(b.folded);
        if (ka != kb) return ka < kb;
        return canonical_key(a.folder.rule) < canonical_key(b.folder.rule);
    });
    return out;
}

FoldTrace FoldTrace::start(const NormalizedRule& rule, const std::vector<FolderRule>& rulebase,
                           size_t universe_size) {
    FoldTrace t;
    for (const auto& a : rule.body) t.atom_closure.insert(atom_instance_key(a));
    t.eq_closure = rule.equalities;

    // atoms reachable by folding range over the rule's fixed variable pool;
    // each step adds one new folder-head instance
    size_t vars = rule_variables(rule).size();
    if (vars == 0) vars = 1;
    (void)universe_size;
    std::set<std::pair<std::string, int>> head_sigs;
    for (const auto& f : rulebase) head_sigs.insert({f.rule.head.pred, f.rule.head.arity()});
    size_t bound = rule.body.size() + 1;
    for (const auto& [p, ar] : head_sigs) {
        size_t combos = 1;
        for (int i = 0; i < ar; ++i) combos *= vars;
        bound += combos;
    }
    t.bound = bound;
    return t;
}

bool FoldTrace::admits(const FoldCandidate& cand) const {
    // F2(i): the folder head may not already be in the closure; F2(ii) is
    // vacuous here because matching never introduces fresh-variable
    // equalities (Eqs2 is always empty)
    return !atom_closure.count(atom_instance_key(cand.folder_head_instance));
}

void FoldTrace::push(const FoldCandidate& cand, const NormalizedRule& before) {
    steps.push_back({before, cand.folder.rule, cand.folded});
    atom_closure.insert(atom_instance_key(cand.folder_head_instance));
    for (const auto& a : cand.folded.body) atom_closure.insert(atom_instance_key(a));
}

namespace {

bool fold_dfs(const NormalizedRule& rule, const std::vector<FolderRule>& rulebase,
              const FoldTrace& trace,
              const std::function<bool(const NormalizedRule&, const FoldTrace&)>& sink,
              FoldStats* stats) {
    if (is_intensional(rule)) return sink(rule, trace);
    for (const auto& cand : fold_candidates(rule, rulebase)) {
        if (!trace.admits(cand)) continue;
        if (trace.steps.size() + 1 > trace.bound)
            throw std::logic_error("fold sequence exceeded its closure bound");
        FoldTrace t2 = trace;
        t2.push(cand, rule);
        if (stats) ++stats->folds;
        if (fold_dfs(cand.folded, rulebase, t2, sink, stats)) return true;
        if (stats) ++stats->dead_ends;
    }
    return false;
}

} // namespace

bool apply_folding(const NormalizedRule& rule, const std::vector<FolderRule>& rulebase,
                   size_t universe_size, FoldMode mode,
                   const std::function<bool(const NormalizedRule&, const FoldTrace&)>& sink,
                   FoldStats* stats) {
    FoldTrace trace = FoldTrace::start(rule, rulebase, universe_size);
    if (fold_dfs(rule, rulebase, trace, sink, stats)) return true;
    if (mode == FoldMode::Enumerating)
        return sink(rule, FoldTrace::start(rule, rulebase, universe_size));
    return false;
}

std::pair<NormalizedRule, FoldTrace>
apply_folding_first(const NormalizedRule& rule, const std::vector<FolderRule>& rulebase,
                    size_t universe_size) {
    NormalizedRule result = rule;
    FoldTrace out = FoldTrace::start(rule, rulebase, universe_size);
    apply_folding(rule, rulebase, universe_size, FoldMode::Bounded,
                  [&](const NormalizedRule& r, const FoldTrace& t) {
                      result = r;
                      out = t;
                      return true;
                  });
    return {result, out};
}

AsmIntroResult introduce_assumption(const AbaFramework& framework, const NormalizedRule& rule,
                                    const std::vector<Term>& var_tuple,
                                    const std::string& asm_pred,
                                    const std::string& contrary_pred) {
    auto rule_vars = rule_variables(rule);
    for (const auto& t : var_tuple) {
        assert(t.is_var());
        if (!rule_vars.count(t.name))
            throw std::invalid_argument("assumption tuple variable not in the rule: " + t.name);
    }

    AsmIntroResult res;
    res.framework = framework;
    bool existing = framework.is_assumption_pred(asm_pred);
    if (!existing) {
        if (framework.predicates().count(asm_pred))
            throw NameCollision("new assumption collides with predicate " + asm_pred);
        if (framework.predicates().count(contrary_pred) ||
            framework.is_assumption_pred(contrary_pred))
            throw NameCollision("new contrary collides with predicate " + contrary_pred);
        std::vector<Term> schema_args;
        for (size_t i = 0; i < var_tuple.size(); ++i)
            schema_args.push_back(Term::variable("X" + std::to_string(i + 1)));
        res.framework.assumptions.push_back(Atom{asm_pred, schema_args});
        res.framework.contraries[asm_pred] = contrary_pred;
    } else {
        auto schema = *framework.assumption_schema(asm_pred);
        if (schema.arity() != static_cast<int>(var_tuple.size()))
            throw std::invalid_argument("assumption arity mismatch for " + asm_pred);
        // pre-existing contrary mappings are never altered
    }

    res.assumption = Atom{asm_pred, var_tuple};
    res.contrary = Atom{res.framework.contraries.at(asm_pred), var_tuple};
    res.rule = rule;
    res.rule.body.push_back(res.assumption);
    std::sort(res.rule.body.begin(), res.rule.body.end());

    res.framework.remove_rule(rule);
    res.framework.add_rule(res.rule);
    return res;
}

SubsumeResult subsume_fact(const AbaFramework& framework, const std::vector<Atom>& positives,
                           const std::vector<Atom>& negatives, const NormalizedRule& fact) {
    AbaFramework without = framework;
    without.remove_rule(fact);
    SubsumeResult res;
    res.removed = is_satisfiable(encode_entailment(without, positives, negatives));
    res.framework = res.removed ? std::move(without) : framework;
    return res;
}

std::vector<Atom> relative_assumptions(const std::vector<NormalizedRule>& rules,
                                       const AbaFramework& framework,
                                       const NormalizedRule& folded) {
    std::vector<Atom> out;
    std::set<std::string> seen;
    std::set<std::string> folded_var_set = rule_variables(folded);
    std::vector<std::string> folded_vars(folded_var_set.begin(), folded_var_set.end());
    EqConstraint folded_eq(folded.equalities);

    for (const auto& r : rules) {
        for (size_t ai = 0; ai < r.body.size(); ++ai) {
            if (!framework.is_assumption_pred(r.body[ai].pred)) continue;

            NormalizedRule rest;
            rest.head = r.head;
            rest.equalities = r.equalities;
            for (size_t i = 0; i < r.body.size(); ++i)
                if (i != ai) rest.body.push_back(r.body[i]);
            if (rest.body.size() != folded.body.size()) continue;

            // match rest's atoms onto folded's atoms (same machinery, with
            // rest playing the folder role)
            Matcher matcher{folded, rest, folded_vars, {}};
            auto fv = rule_variables(rest);
            for (const auto& v : vars_of(r.body[ai])) fv.insert(v);
            matcher.folder_vars_.assign(fv.begin(), fv.end());

            matcher.enumerate([&](const VarMap& sigma, const std::vector<char>& used,
                                  const std::vector<int>&) {
                // bodies must match completely and the equality constraints
                // must be equivalent in both directions
                for (char u : used)
                    if (!u) return;
                std::vector<Equality> mapped;
                for (const auto& e : rest.equalities) {
                    Equality ge{e.lhs.is_var() ? Term::variable(sigma.at(e.lhs.name)) : e.lhs,
                                e.rhs.is_var() ? Term::variable(sigma.at(e.rhs.name)) : e.rhs};
                    mapped.push_back(std::move(ge));
                }
                if (!folded_eq.entails_all(mapped)) return;
                EqConstraint mapped_eq(mapped);
                if (!mapped_eq.entails_all(folded.equalities)) return;

                Atom alpha = apply_map(r.body[ai], sigma);
                if (seen.insert(to_string(alpha)).second) out.push_back(std::move(alpha));
            });
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace aba
