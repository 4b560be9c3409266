#include <algorithm>
#include <set>

#include "aba/asp.hpp"
#include "aba/rule.hpp"

namespace aba {

AspRule AspRule::fact(Atom a) {
    AspRule r;
    r.kind = Kind::Normal;
    r.head = std::move(a);
    return r;
}

AspRule AspRule::normal(Atom head, std::vector<Atom> pos, std::vector<Atom> naf,
                        std::vector<Equality> eqs) {
    AspRule r;
    r.kind = Kind::Normal;
    r.head = std::move(head);
    r.pos_body = std::move(pos);
    r.naf_body = std::move(naf);
    r.equalities = std::move(eqs);
    return r;
}

AspRule AspRule::constraint(std::vector<Atom> pos, std::vector<Atom> naf,
                            std::vector<Equality> eqs) {
    AspRule r;
    r.kind = Kind::Constraint;
    r.pos_body = std::move(pos);
    r.naf_body = std::move(naf);
    r.equalities = std::move(eqs);
    return r;
}

AspRule AspRule::choice(std::vector<Atom> heads, std::vector<Atom> guard) {
    AspRule r;
    r.kind = Kind::Choice;
    r.choice_heads = std::move(heads);
    r.pos_body = std::move(guard);
    return r;
}

int GroundAspProgram::intern(const Atom& a) {
    auto it = index.find(a);
    if (it != index.end()) return it->second;
    int idx = static_cast<int>(atoms.size());
    atoms.push_back(a);
    index.emplace(a, idx);
    return idx;
}

std::optional<int> GroundAspProgram::lookup(const Atom& a) const {
    auto it = index.find(a);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

bool AnswerSet::contains(const Atom& a) const {
    return std::binary_search(atoms.begin(), atoms.end(), a);
}

namespace {

Atom complement_atom(const Atom& a) {
    return Atom{std::string(kComplementPrefix) + a.pred, a.args};
}

// choice rules become even loops over fresh complement atoms
std::vector<AspRule> compile_choices(const std::vector<AspRule>& rules) {
    std::vector<AspRule> out;
    out.reserve(rules.size());
    for (const auto& r : rules) {
        if (r.kind != AspRule::Kind::Choice) {
            out.push_back(r);
            continue;
        }
        for (const auto& h : r.choice_heads) {
            Atom comp = complement_atom(h);
            AspRule in = AspRule::normal(h, r.pos_body, {comp}, r.equalities);
            AspRule keep_out = AspRule::normal(comp, r.pos_body, {h}, r.equalities);
            out.push_back(std::move(in));
            out.push_back(std::move(keep_out));
        }
    }
    return out;
}

struct RuleVars {
    std::vector<std::string> vars;               // enumeration order
    std::map<std::string, int> pos_of;
};

void collect_vars(const Atom& a, RuleVars& rv) {
    for (const auto& t : a.args)
        if (t.is_var() && rv.pos_of.emplace(t.name, rv.vars.size()).second)
            rv.vars.push_back(t.name);
}

Atom substitute(const Atom& a, const RuleVars& rv, const std::vector<std::string>& binding) {
    Atom out{a.pred, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) {
        if (t.is_const())
            out.args.push_back(t);
        else
            out.args.push_back(Term::constant(binding[rv.pos_of.at(t.name)]));
    }
    return out;
}

} // namespace

GroundAspProgram ground(const AspProgram& program) {
    GroundAspProgram gp;
    std::vector<AspRule> rules = compile_choices(program.rules);
    std::set<std::string> minimize(program.minimize_preds.begin(), program.minimize_preds.end());

    // ground every rule, then reindex atoms in sorted order so enumeration
    // is deterministic
    struct PendingRule {
        std::optional<Atom> head;
        std::vector<Atom> pos, naf;
    };
    std::vector<PendingRule> ground_rules;

    for (const auto& r : rules) {
        RuleVars rv;
        if (r.head) collect_vars(*r.head, rv);
        for (const auto& a : r.pos_body) collect_vars(a, rv);
        for (const auto& a : r.naf_body) collect_vars(a, rv);
        for (const auto& e : r.equalities) {
            if (e.lhs.is_var() && rv.pos_of.emplace(e.lhs.name, rv.vars.size()).second)
                rv.vars.push_back(e.lhs.name);
            if (e.rhs.is_var() && rv.pos_of.emplace(e.rhs.name, rv.vars.size()).second)
                rv.vars.push_back(e.rhs.name);
        }

        // range restriction: every variable is bound by a positive body atom
        // or an equality
        std::set<std::string> bound = vars_of(r.pos_body);
        for (const auto& e : r.equalities) {
            if (e.lhs.is_var()) bound.insert(e.lhs.name);
            if (e.rhs.is_var()) bound.insert(e.rhs.name);
        }
        for (const auto& v : rv.vars)
            if (!bound.count(v))
                throw RangeRestrictionError("variable " + v + " not bound by a positive atom or equality");

        // resolve equalities: classes either pinned to a constant or
        // enumerated over the universe
        EqConstraint eq(r.equalities);
        if (eq.contradictory()) continue;

        // representative class per variable
        std::map<std::string, std::string> class_rep; // var -> class id (rep var name)
        std::vector<std::string> free_classes;
        std::map<std::string, std::string> pinned;    // var -> constant
        {
            // use EqConstraint entailment to group variables
            std::vector<std::string> reps;
            for (const auto& v : rv.vars) {
                if (auto c = eq.constant_of(v)) {
                    pinned[v] = *c;
                    continue;
                }
                bool found = false;
                for (const auto& rep : reps) {
                    if (eq.entails({Term::variable(v), Term::variable(rep)})) {
                        class_rep[v] = rep;
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    reps.push_back(v);
                    class_rep[v] = v;
                    free_classes.push_back(v);
                }
            }
        }

        if (!free_classes.empty() && program.universe.empty()) continue;

        std::vector<std::string> binding(rv.vars.size());
        std::vector<size_t> cursor(free_classes.size(), 0);
        bool done = false;
        while (!done) {
            std::map<std::string, std::string> class_value;
            for (size_t i = 0; i < free_classes.size(); ++i)
                class_value[free_classes[i]] = program.universe[cursor[i]];
            for (const auto& v : rv.vars) {
                auto p = pinned.find(v);
                binding[rv.pos_of.at(v)] =
                    p != pinned.end() ? p->second : class_value.at(class_rep.at(v));
            }

            PendingRule pr;
            if (r.head) pr.head = substitute(*r.head, rv, binding);
            for (const auto& a : r.pos_body) pr.pos.push_back(substitute(a, rv, binding));
            for (const auto& a : r.naf_body) pr.naf.push_back(substitute(a, rv, binding));
            ground_rules.push_back(std::move(pr));

            // advance enumeration
            done = true;
            for (size_t i = 0; i < cursor.size(); ++i) {
                if (++cursor[i] < program.universe.size()) {
                    done = false;
                    break;
                }
                cursor[i] = 0;
            }
            if (free_classes.empty()) done = true;
        }
    }

    // deterministic atom table: sorted unique atoms first
    std::set<Atom> all;
    for (const auto& pr : ground_rules) {
        if (pr.head) all.insert(*pr.head);
        all.insert(pr.pos.begin(), pr.pos.end());
        all.insert(pr.naf.begin(), pr.naf.end());
    }
    for (const auto& a : all) gp.intern(a);

    std::set<std::vector<int>> seen;
    for (const auto& pr : ground_rules) {
        GroundRule gr;
        gr.head = pr.head ? gp.index.at(*pr.head) : -1;
        for (const auto& a : pr.pos) gr.pos.push_back(gp.index.at(a));
        for (const auto& a : pr.naf) gr.naf.push_back(gp.index.at(a));
        std::sort(gr.pos.begin(), gr.pos.end());
        gr.pos.erase(std::unique(gr.pos.begin(), gr.pos.end()), gr.pos.end());
        std::sort(gr.naf.begin(), gr.naf.end());
        gr.naf.erase(std::unique(gr.naf.begin(), gr.naf.end()), gr.naf.end());
        // duplicate ground instances collapse
        std::vector<int> sig{gr.head, -2};
        sig.insert(sig.end(), gr.pos.begin(), gr.pos.end());
        sig.push_back(-3);
        sig.insert(sig.end(), gr.naf.begin(), gr.naf.end());
        if (seen.insert(std::move(sig)).second) gp.rules.push_back(std::move(gr));
    }

    for (int i = 0; i < static_cast<int>(gp.atoms.size()); ++i)
        if (minimize.count(gp.atoms[i].pred)) gp.minimize_atoms.push_back(i);

    return gp;
}

} // namespace aba
