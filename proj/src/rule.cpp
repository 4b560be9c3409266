#include "aba/rule.hpp"

#include <algorithm>
#include <sstream>

namespace aba {

namespace {

std::string key_of(const Term& t) {
    return (t.is_var() ? "v:" : "c:") + t.name;
}

} // namespace

EqConstraint::EqConstraint(const std::vector<Equality>& eqs) {
    for (const auto& e : eqs) merge(e.lhs, e.rhs);
}

std::string EqConstraint::find(const std::string& key) const {
    auto it = parent_.find(key);
    if (it == parent_.end()) {
        parent_[key] = key;
        return key;
    }
    if (it->second == key) return key;
    std::string root = find(it->second);
    parent_[key] = root;
    return root;
}

void EqConstraint::merge(const Term& a, const Term& b) {
    std::string ra = find(key_of(a));
    std::string rb = find(key_of(b));
    if (ra == rb) return;
    // keep constants as class roots so constant_of is a root lookup
    bool ca = ra[0] == 'c';
    bool cb = rb[0] == 'c';
    if (ca && cb) {
        contradictory_ = true;
        parent_[rb] = ra;
        return;
    }
    if (cb) std::swap(ra, rb);
    parent_[rb] = ra;
}

bool EqConstraint::entails(const Equality& e) const {
    if (contradictory_) return true;
    if (e.lhs.is_const() && e.rhs.is_const()) return e.lhs.name == e.rhs.name;
    return find(key_of(e.lhs)) == find(key_of(e.rhs));
}

bool EqConstraint::entails_all(const std::vector<Equality>& es) const {
    for (const auto& e : es)
        if (!entails(e)) return false;
    return true;
}

std::optional<std::string> EqConstraint::constant_of(const std::string& var) const {
    auto it = parent_.find("v:" + var);
    if (it == parent_.end()) return std::nullopt;
    std::string root = find("v:" + var);
    if (root[0] == 'c') return root.substr(2);
    return std::nullopt;
}

std::set<std::string> EqConstraint::constants() const {
    std::set<std::string> out;
    for (const auto& [k, v] : parent_)
        if (k[0] == 'c') out.insert(k.substr(2));
    return out;
}

std::set<std::string> EqConstraint::variables() const {
    std::set<std::string> out;
    for (const auto& [k, v] : parent_)
        if (k[0] == 'v') out.insert(k.substr(2));
    return out;
}

std::vector<Equality>
EqConstraint::restricted_canonical(const std::set<std::string>& keep_vars,
                                   const std::vector<Equality>& fallback) const {
    if (contradictory_) return fallback;
    // group kept variables (and constants) by class root
    std::map<std::string, std::vector<std::string>> class_vars;
    std::map<std::string, std::string> class_const;
    for (const auto& [k, v] : parent_) {
        std::string root = find(k);
        if (k[0] == 'c') {
            class_const[root] = k.substr(2);
        } else if (keep_vars.count(k.substr(2))) {
            class_vars[root].push_back(k.substr(2));
        }
    }
    std::vector<Equality> out;
    for (auto& [root, vars] : class_vars) {
        std::sort(vars.begin(), vars.end());
        auto c = class_const.find(root);
        if (c != class_const.end()) {
            for (const auto& v : vars)
                out.push_back({Term::variable(v), Term::constant(c->second)});
        } else {
            for (size_t i = 1; i < vars.size(); ++i)
                out.push_back({Term::variable(vars[i]), Term::variable(vars[0])});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Equality>
EqConstraint::residual_after(const std::vector<Equality>& consumed) const {
    EqConstraint ceq(consumed);
    // collect members per class of this constraint
    std::map<std::string, std::vector<Term>> members;
    for (const auto& [k, v] : parent_) {
        Term t = k[0] == 'c' ? Term::constant(k.substr(2)) : Term::variable(k.substr(2));
        members[find(k)].push_back(t);
    }
    std::vector<Equality> out;
    for (auto& [root, ms] : members) {
        if (ms.size() < 2) continue;
        // partition members by the consumed constraint's classes
        std::map<std::string, std::vector<Term>> groups;
        for (const auto& m : ms) groups[ceq.find(key_of(m))].push_back(m);
        if (groups.size() < 2) continue;
        // pick a representative per group: constants win, else smallest var
        std::vector<Term> reps;
        for (auto& [g, terms] : groups) {
            std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
                if (a.is_const() != b.is_const()) return a.is_const();
                return a.name < b.name;
            });
            reps.push_back(terms[0]);
        }
        std::sort(reps.begin(), reps.end(), [](const Term& a, const Term& b) {
            if (a.is_const() != b.is_const()) return a.is_const();
            return a.name < b.name;
        });
        // anchor = constant if present, else first rep
        for (size_t i = 1; i < reps.size(); ++i)
            out.push_back({reps[i], reps[0]});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::set<std::string> vars_of(const Atom& a) {
    std::set<std::string> out;
    for (const auto& t : a.args)
        if (t.is_var()) out.insert(t.name);
    return out;
}

std::set<std::string> vars_of(const std::vector<Atom>& atoms) {
    std::set<std::string> out;
    for (const auto& a : atoms) {
        auto v = vars_of(a);
        out.insert(v.begin(), v.end());
    }
    return out;
}

std::set<std::string> rule_variables(const NormalizedRule& rule) {
    std::set<std::string> out = vars_of(rule.head);
    for (const auto& a : rule.body) {
        auto v = vars_of(a);
        out.insert(v.begin(), v.end());
    }
    for (const auto& e : rule.equalities) {
        if (e.lhs.is_var()) out.insert(e.lhs.name);
        if (e.rhs.is_var()) out.insert(e.rhs.name);
    }
    return out;
}

NormalizedRule normalize(const RawRule& rule, const std::set<std::string>& assumption_preds) {
    if (assumption_preds.count(rule.head.pred))
        throw FlatnessViolation("assumption predicate used as rule head: " + rule.head.pred);

    // collect names in use so fresh variables do not clash
    std::set<std::string> used;
    auto note = [&used](const Atom& a) {
        for (const auto& t : a.args)
            if (t.is_var()) used.insert(t.name);
    };
    note(rule.head);
    for (const auto& a : rule.body) note(a);
    for (const auto& e : rule.equalities) {
        if (e.lhs.is_var()) used.insert(e.lhs.name);
        if (e.rhs.is_var()) used.insert(e.rhs.name);
    }

    int counter = 0;
    auto fresh = [&]() {
        std::string name;
        do {
            name = "X" + std::to_string(++counter);
        } while (used.count(name));
        used.insert(name);
        return name;
    };

    std::vector<Equality> eqs = rule.equalities;
    auto strip = [&](const Atom& a) {
        Atom out{a.pred, {}};
        out.args.reserve(a.args.size());
        for (const auto& t : a.args) {
            if (t.is_var()) {
                out.args.push_back(t);
            } else {
                Term v = Term::variable(fresh());
                eqs.push_back({v, t});
                out.args.push_back(v);
            }
        }
        return out;
    };

    NormalizedRule out;
    out.label = rule.label;
    out.head = strip(rule.head);
    for (const auto& a : rule.body) out.body.push_back(strip(a));
    std::sort(out.body.begin(), out.body.end());

    std::set<std::string> keep = vars_of(out.head);
    auto bv = vars_of(out.body);
    keep.insert(bv.begin(), bv.end());

    EqConstraint eq(eqs);
    std::sort(eqs.begin(), eqs.end());
    out.equalities = eq.restricted_canonical(keep, eqs);
    return out;
}

bool is_intensional(const NormalizedRule& rule) {
    for (const auto& e : rule.equalities)
        if (e.lhs.is_const() || e.rhs.is_const()) return false;
    for (const auto& t : rule.head.args)
        if (t.is_const()) return false;
    for (const auto& a : rule.body)
        for (const auto& t : a.args)
            if (t.is_const()) return false;
    return true;
}

std::optional<RuleBody> equality_rewrite(const RuleBody& body, const Equality& goal) {
    EqConstraint eq(body.equalities);
    if (!eq.entails(goal)) return std::nullopt;
    RuleBody out;
    out.atoms = body.atoms;
    out.equalities = eq.residual_after({goal});
    out.equalities.push_back(goal);
    std::sort(out.equalities.begin(), out.equalities.end());
    return out;
}

std::string to_string(const NormalizedRule& rule) {
    std::ostringstream os;
    os << to_string(rule.head);
    bool first = true;
    auto sep = [&]() {
        os << (first ? " :- " : ", ");
        first = false;
    };
    for (const auto& e : rule.equalities) {
        sep();
        os << to_string(e);
    }
    for (const auto& a : rule.body) {
        sep();
        os << to_string(a);
    }
    os << '.';
    return os.str();
}

namespace {

std::string key_for_order(const NormalizedRule& rule, const std::vector<size_t>& order) {
    std::map<std::string, std::string> ren;
    auto name = [&](const Term& t) -> std::string {
        if (t.is_const()) return t.name;
        auto it = ren.find(t.name);
        if (it != ren.end()) return it->second;
        std::string n = "V" + std::to_string(ren.size() + 1);
        ren[t.name] = n;
        return n;
    };
    std::ostringstream os;
    auto atom = [&](const Atom& a) {
        os << a.pred << '(';
        for (const auto& t : a.args) os << name(t) << ',';
        os << ')';
    };
    atom(rule.head);
    os << ":-";
    std::ostringstream bodyos;
    for (size_t i : order) {
        const Atom& a = rule.body[i];
        bodyos << a.pred << '(';
        for (const auto& t : a.args) bodyos << name(t) << ',';
        bodyos << ')';
    }
    // equalities only mention head/body variables, so all names are fixed now
    std::vector<std::string> eqs;
    eqs.reserve(rule.equalities.size());
    for (const auto& e : rule.equalities) {
        std::string l = name(e.lhs), r = name(e.rhs);
        if (r < l) std::swap(l, r);
        eqs.push_back(l + "=" + r);
    }
    std::sort(eqs.begin(), eqs.end());
    for (const auto& e : eqs) os << e << ',';
    os << '|' << bodyos.str();
    return os.str();
}

} // namespace

// Alpha-invariant: minimised over body-atom orderings (rules are small).
std::string canonical_key(const NormalizedRule& rule) {
    std::vector<size_t> order(rule.body.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (order.size() > 6) return key_for_order(rule, order);
    std::string best;
    do {
        std::string k = key_for_order(rule, order);
        if (best.empty() || k < best) best = k;
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

void sort_canonically(std::vector<NormalizedRule>& rules) {
    std::sort(rules.begin(), rules.end(), [](const NormalizedRule& a, const NormalizedRule& b) {
        return canonical_key(a) < canonical_key(b);
    });
}

bool same_rule(const NormalizedRule& a, const NormalizedRule& b) {
    return canonical_key(a) == canonical_key(b);
}

} // namespace aba
