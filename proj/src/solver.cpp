#include "aba/solver.hpp"

#include <algorithm>
#include <cstdint>

namespace aba {

namespace {

constexpr int8_t kUnknown = 0;
constexpr int8_t kTrue = 1;
constexpr int8_t kFalse = 2;

struct Search {
    const GroundAspProgram& gp;
    std::vector<std::vector<int>> rules_for_head; // atom -> rule indices
    std::vector<char> is_minimize;

    explicit Search(const GroundAspProgram& g) : gp(g) {
        rules_for_head.resize(gp.atoms.size());
        for (int ri = 0; ri < static_cast<int>(gp.rules.size()); ++ri)
            if (gp.rules[ri].head >= 0) rules_for_head[gp.rules[ri].head].push_back(ri);
        is_minimize.assign(gp.atoms.size(), 0);
        for (int a : gp.minimize_atoms) is_minimize[a] = 1;
    }

    int true_min_count(const std::vector<int8_t>& val) const {
        int n = 0;
        for (int a : gp.minimize_atoms)
            if (val[a] == kTrue) ++n;
        return n;
    }

    // unit propagation over the completed rules; returns false on conflict
    bool propagate(std::vector<int8_t>& val) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& r : gp.rules) {
                int unknown = -1; // lone unassigned literal (encoded: pos -> +i+1, naf -> -(i+1))
                int unknown_count = 0;
                bool falsified = false;
                for (int a : r.pos) {
                    if (val[a] == kFalse) { falsified = true; break; }
                    if (val[a] == kUnknown) { ++unknown_count; unknown = a + 1; }
                }
                if (!falsified) {
                    for (int a : r.naf) {
                        if (val[a] == kTrue) { falsified = true; break; }
                        if (val[a] == kUnknown) { ++unknown_count; unknown = -(a + 1); }
                    }
                }
                if (falsified) continue;
                if (unknown_count == 0) {
                    // body satisfied
                    if (r.head < 0) return false;
                    if (val[r.head] == kFalse) return false;
                    if (val[r.head] == kUnknown) { val[r.head] = kTrue; changed = true; }
                } else if (unknown_count == 1 && (r.head < 0 || val[r.head] == kFalse)) {
                    // head cannot fire: falsify the remaining literal
                    if (unknown > 0) {
                        val[unknown - 1] = kFalse;
                    } else {
                        val[-unknown - 1] = kTrue;
                    }
                    changed = true;
                }
            }
            // an atom with no live rule cannot be true
            for (size_t a = 0; a < gp.atoms.size(); ++a) {
                if (val[a] == kFalse) continue;
                bool live = false;
                for (int ri : rules_for_head[a]) {
                    const auto& r = gp.rules[ri];
                    bool dead = false;
                    for (int b : r.pos)
                        if (val[b] == kFalse) { dead = true; break; }
                    if (!dead)
                        for (int b : r.naf)
                            if (val[b] == kTrue) { dead = true; break; }
                    if (!dead) { live = true; break; }
                }
                if (!live) {
                    if (val[a] == kTrue) return false;
                    val[a] = kFalse;
                    changed = true;
                }
            }
        }
        return true;
    }

    bool stable(const std::vector<int8_t>& val) const {
        // least model of the reduct w.r.t. the candidate
        std::vector<char> lm(gp.atoms.size(), 0);
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& r : gp.rules) {
                if (r.head < 0 || lm[r.head]) continue;
                bool fire = true;
                for (int a : r.naf)
                    if (val[a] == kTrue) { fire = false; break; }
                if (fire)
                    for (int a : r.pos)
                        if (!lm[a]) { fire = false; break; }
                if (fire) {
                    lm[r.head] = 1;
                    grew = true;
                }
            }
        }
        for (size_t a = 0; a < gp.atoms.size(); ++a)
            if ((val[a] == kTrue) != (lm[a] != 0)) return false;
        for (const auto& r : gp.rules) {
            if (r.head >= 0) continue;
            bool sat = true;
            for (int a : r.pos)
                if (val[a] != kTrue) { sat = false; break; }
            if (sat)
                for (int a : r.naf)
                    if (val[a] == kTrue) { sat = false; break; }
            if (sat) return false; // violated constraint
        }
        return true;
    }

    // DFS over unassigned atoms, false first. visit() returns false to stop
    // the whole search. bound: prune when the count of true minimise atoms
    // exceeds *bound (callers may tighten it mid-search).
    template <typename Visit>
    bool dfs(std::vector<int8_t> val, const long* bound, const Visit& visit) const {
        if (!propagate(val)) return true;
        if (bound && true_min_count(val) > *bound) return true;
        int pick = -1;
        for (size_t a = 0; a < gp.atoms.size(); ++a)
            if (val[a] == kUnknown) { pick = static_cast<int>(a); break; }
        if (pick < 0) {
            if (stable(val)) return visit(val);
            return true;
        }
        auto left = val;
        left[pick] = kFalse;
        if (!dfs(std::move(left), bound, visit)) return false;
        val[pick] = kTrue;
        return dfs(std::move(val), bound, visit);
    }
};

} // namespace

AnswerSet materialize(const GroundAspProgram& ground, const std::vector<char>& model) {
    AnswerSet out;
    for (size_t a = 0; a < ground.atoms.size(); ++a) {
        if (!model[a]) continue;
        // choice-rule complements are an encoding artifact; primed atoms stay
        if (ground.atoms[a].pred.starts_with(kComplementPrefix)) continue;
        out.atoms.push_back(ground.atoms[a]);
    }
    std::sort(out.atoms.begin(), out.atoms.end());
    for (int a : ground.minimize_atoms)
        if (model[a]) ++out.cost;
    return out;
}

std::vector<AnswerSet> answer_sets(const GroundAspProgram& ground, size_t limit) {
    Search search(ground);
    std::vector<AnswerSet> out;
    if (limit == 0) return out;
    std::vector<int8_t> init(ground.atoms.size(), kUnknown);

    auto as_model = [&](const std::vector<int8_t>& val) {
        std::vector<char> m(ground.atoms.size(), 0);
        for (size_t a = 0; a < ground.atoms.size(); ++a) m[a] = val[a] == kTrue;
        return m;
    };

    if (ground.minimize_atoms.empty()) {
        search.dfs(init, nullptr, [&](const std::vector<int8_t>& val) {
            out.push_back(materialize(ground, as_model(val)));
            return out.size() < limit;
        });
        return out;
    }

    // phase one: find the optimum, tightening the bound as models appear
    long best = -1;
    long prune = static_cast<long>(ground.minimize_atoms.size());
    search.dfs(init, &prune, [&](const std::vector<int8_t>& val) {
        best = search.true_min_count(val);
        prune = best - 1;
        return best != 0;
    });
    if (best < 0) return out;

    // phase two: enumerate at the optimum
    search.dfs(init, &best, [&](const std::vector<int8_t>& val) {
        if (search.true_min_count(val) == best)
            out.push_back(materialize(ground, as_model(val)));
        return out.size() < limit;
    });
    return out;
}

std::vector<AnswerSet> answer_sets(const AspProgram& program, size_t limit) {
    return answer_sets(ground(program), limit);
}

bool is_satisfiable(const GroundAspProgram& ground) {
    Search search(ground);
    std::vector<int8_t> init(ground.atoms.size(), kUnknown);
    bool found = false;
    search.dfs(init, nullptr, [&](const std::vector<int8_t>&) {
        found = true;
        return false;
    });
    return found;
}

bool is_satisfiable(const AspProgram& program) { return is_satisfiable(ground(program)); }

bool check_stable_model(const GroundAspProgram& ground, const std::set<int>& candidate) {
    Search search(ground);
    std::vector<int8_t> val(ground.atoms.size(), kFalse);
    for (int a : candidate) {
        if (a < 0 || a >= static_cast<int>(ground.atoms.size())) return false;
        val[a] = kTrue;
    }
    return search.stable(val);
}

bool check_stable_model(const GroundAspProgram& ground, const std::vector<Atom>& candidate) {
    std::set<int> idx;
    for (const auto& a : candidate) {
        auto i = ground.lookup(a);
        if (!i) return false;
        idx.insert(*i);
    }
    return check_stable_model(ground, idx);
}

} // namespace aba
