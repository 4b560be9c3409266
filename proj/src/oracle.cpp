#include "aba/oracle.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "aba/encoding.hpp"

namespace aba {

namespace {

// fixed-width bitset: 256 ground atoms is plenty for oracle-sized instances
struct Bits {
    std::array<uint64_t, 4> w{};

    void set(int i) { w[i >> 6] |= uint64_t(1) << (i & 63); }
    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    bool subset_of(const Bits& o) const {
        for (int i = 0; i < 4; ++i)
            if (w[i] & ~o.w[i]) return false;
        return true;
    }
    void or_with(const Bits& o) {
        for (int i = 0; i < 4; ++i) w[i] |= o.w[i];
    }
    bool operator==(const Bits& o) const { return w == o.w; }
};

struct GroundedFramework {
    std::vector<Atom> atoms;       // ground atom table
    std::map<Atom, int> index;
    struct Rule {
        int head;
        Bits body_atoms;  // non-assumption body
        Bits body_asms;   // assumption body
    };
    std::vector<Rule> rules;
    std::vector<int> asm_atoms;       // indices of ground assumptions, sorted
    std::vector<int> asm_pos;         // atom idx -> position in asm_atoms, or -1
    std::vector<int> contrary_atom;   // per asm position: contrary atom idx (or -1 if unindexed)

    int intern(const Atom& a) {
        auto it = index.find(a);
        if (it != index.end()) return it->second;
        int i = static_cast<int>(atoms.size());
        if (i >= 256) throw AssumptionBoundExceeded("oracle instance exceeds 256 ground atoms");
        atoms.push_back(a);
        index.emplace(a, i);
        return i;
    }
};

std::vector<Atom> ground_tuples(const Atom& schema, const std::vector<std::string>& universe) {
    // all ground instances of a schema atom (distinct variables range freely,
    // repeated variables stay equal)
    std::vector<Atom> out;
    std::vector<std::string> vars;
    std::map<std::string, int> pos;
    for (const auto& t : schema.args)
        if (t.is_var() && pos.emplace(t.name, vars.size()).second) vars.push_back(t.name);
    if (!vars.empty() && universe.empty()) return out;
    std::vector<size_t> cur(vars.size(), 0);
    while (true) {
        Atom g{schema.pred, {}};
        for (const auto& t : schema.args)
            g.args.push_back(t.is_var() ? Term::constant(universe[cur[pos[t.name]]]) : t);
        out.push_back(std::move(g));
        size_t i = 0;
        for (; i < cur.size(); ++i) {
            if (++cur[i] < universe.size()) break;
            cur[i] = 0;
        }
        if (i == cur.size()) break;
    }
    return out;
}

GroundedFramework ground_framework(const AbaFramework& fw) {
    GroundedFramework g;

    // reuse the ASP grounder on the plain rules + dom facts
    AspProgram prog;
    prog.universe = fw.universe;
    for (const auto& r : fw.rules)
        prog.rules.push_back(AspRule::normal(r.head, r.body, {}, r.equalities));
    for (const auto& c : fw.universe)
        prog.rules.push_back(AspRule::fact(Atom{std::string(kDomPred), {Term::constant(c)}}));
    GroundAspProgram gp = ground(prog);

    for (const auto& a : gp.atoms) g.intern(a);
    for (const auto& schema : fw.assumptions) {
        for (const auto& a : ground_tuples(schema, fw.universe)) {
            g.intern(a);
            g.intern(Atom{fw.contraries.at(schema.pred), a.args});
        }
    }

    std::set<std::string> asm_preds;
    for (const auto& a : fw.assumptions) asm_preds.insert(a.pred);

    for (const auto& r : gp.rules) {
        GroundedFramework::Rule gr;
        gr.head = g.index.at(gp.atoms[r.head]);
        for (int b : r.pos) {
            int idx = g.index.at(gp.atoms[b]);
            if (asm_preds.count(gp.atoms[b].pred))
                gr.body_asms.set(idx);
            else
                gr.body_atoms.set(idx);
        }
        g.rules.push_back(std::move(gr));
    }

    g.asm_pos.assign(g.atoms.size(), -1);
    for (size_t i = 0; i < g.atoms.size(); ++i)
        if (asm_preds.count(g.atoms[i].pred)) {
            g.asm_pos[i] = static_cast<int>(g.asm_atoms.size());
            g.asm_atoms.push_back(static_cast<int>(i));
        }
    for (int ai : g.asm_atoms) {
        Atom contrary{fw.contraries.at(g.atoms[ai].pred), g.atoms[ai].args};
        auto it = g.index.find(contrary);
        g.contrary_atom.push_back(it == g.index.end() ? -1 : it->second);
    }
    return g;
}

// claims derivable when exactly the assumptions in `chosen` hold
Bits derive_claims(const GroundedFramework& g, const Bits& chosen) {
    Bits claims = chosen;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& r : g.rules) {
            if (claims.test(r.head)) continue;
            if (r.body_asms.subset_of(chosen) && r.body_atoms.subset_of(claims)) {
                claims.set(r.head);
                grew = true;
            }
        }
    }
    return claims;
}

struct Enumeration {
    GroundedFramework g;
    std::vector<int> free_asms;  // asm positions enumerated
    Bits forced_out;             // assumptions excluded from every extension
    Bits base_claims;
};

Enumeration prepare(const AbaFramework& fw, const OracleOptions& opts) {
    Enumeration e{ground_framework(fw), {}, {}, {}};
    auto& g = e.g;
    e.base_claims = derive_claims(g, Bits{});
    for (size_t p = 0; p < g.asm_atoms.size(); ++p) {
        int c = g.contrary_atom[p];
        if (c >= 0 && e.base_claims.test(c))
            e.forced_out.set(g.asm_atoms[p]); // attacked by assumption-free claims
        else
            e.free_asms.push_back(static_cast<int>(p));
    }
    if (e.free_asms.size() > static_cast<size_t>(opts.max_ground_assumptions))
        throw AssumptionBoundExceeded(std::to_string(e.free_asms.size()) +
                                      " free ground assumptions exceed the oracle bound of " +
                                      std::to_string(opts.max_ground_assumptions));
    return e;
}

// enumerate stable assumption sets; visit(chosen, claims) returns false to stop
template <typename Visit>
void enumerate_stable(const Enumeration& e, const Visit& visit) {
    const auto& g = e.g;
    size_t n = e.free_asms.size();
    for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
        Bits chosen;
        for (size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) chosen.set(g.asm_atoms[e.free_asms[i]]);
        Bits claims = derive_claims(g, chosen);
        bool ok = true;
        for (size_t p = 0; p < g.asm_atoms.size() && ok; ++p) {
            int atom = g.asm_atoms[p];
            int c = g.contrary_atom[p];
            bool in = chosen.test(atom);
            bool attacked = c >= 0 && claims.test(c);
            if (in && attacked) ok = false;          // not conflict-free
            if (!in && !attacked) ok = false;        // unattacked outsider
        }
        if (ok && !visit(chosen, claims)) return;
    }
}

Extension materialize_extension(const GroundedFramework& g, const Bits& chosen, const Bits& claims) {
    Extension out;
    for (int ai : g.asm_atoms)
        if (chosen.test(ai)) out.assumptions_in.push_back(g.atoms[ai]);
    for (size_t i = 0; i < g.atoms.size(); ++i)
        if (claims.test(static_cast<int>(i))) out.claims.push_back(g.atoms[i]);
    std::sort(out.assumptions_in.begin(), out.assumptions_in.end());
    std::sort(out.claims.begin(), out.claims.end());
    return out;
}

} // namespace

std::vector<Extension> stable_extensions(const AbaFramework& framework, const OracleOptions& opts) {
    Enumeration e = prepare(framework, opts);
    std::vector<Extension> out;
    enumerate_stable(e, [&](const Bits& chosen, const Bits& claims) {
        out.push_back(materialize_extension(e.g, chosen, claims));
        return true;
    });
    return out;
}

bool bravely_entails(const AbaFramework& framework,
                     const std::vector<Atom>& positives,
                     const std::vector<Atom>& negatives,
                     Extension* witness,
                     const OracleOptions& opts) {
    Enumeration e = prepare(framework, opts);
    // an example absent from the table is simply never claimed
    std::vector<int> pos, neg;
    bool pos_unreachable = false;
    for (const auto& a : positives) {
        auto it = e.g.index.find(a);
        if (it == e.g.index.end())
            pos_unreachable = true;
        else
            pos.push_back(it->second);
    }
    for (const auto& a : negatives) {
        auto it = e.g.index.find(a);
        if (it != e.g.index.end()) neg.push_back(it->second);
    }
    if (pos_unreachable) return false;

    bool found = false;
    enumerate_stable(e, [&](const Bits& chosen, const Bits& claims) {
        for (int p : pos)
            if (!claims.test(p)) return true;
        for (int n : neg)
            if (claims.test(n)) return true;
        found = true;
        if (witness) *witness = materialize_extension(e.g, chosen, claims);
        return false;
    });
    return found;
}

std::map<Atom, std::vector<std::vector<Atom>>>
supports(const AbaFramework& framework, const OracleOptions& opts) {
    GroundedFramework g = ground_framework(framework);
    if (g.asm_atoms.size() > 64)
        throw AssumptionBoundExceeded("too many ground assumptions for support masks");
    (void)opts;

    // minimal assumption masks per claim
    std::vector<std::vector<uint64_t>> minimal(g.atoms.size());
    auto insert_minimal = [](std::vector<uint64_t>& sets, uint64_t m) {
        for (uint64_t s : sets)
            if ((s & ~m) == 0) return false; // an existing subset covers m
        std::erase_if(sets, [m](uint64_t s) { return (m & ~s) == 0; });
        sets.push_back(m);
        return true;
    };
    for (size_t p = 0; p < g.asm_atoms.size(); ++p)
        minimal[g.asm_atoms[p]].push_back(uint64_t(1) << p);

    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& r : g.rules) {
            // collect per-literal support lists
            std::vector<const std::vector<uint64_t>*> lists;
            uint64_t fixed = 0;
            bool dead = false;
            for (size_t i = 0; i < g.atoms.size() && !dead; ++i) {
                if (r.body_asms.test(static_cast<int>(i)))
                    fixed |= uint64_t(1) << g.asm_pos[i];
                else if (r.body_atoms.test(static_cast<int>(i))) {
                    if (minimal[i].empty())
                        dead = true;
                    else
                        lists.push_back(&minimal[i]);
                }
            }
            if (dead) continue;
            // product of the support lists
            std::vector<uint64_t> acc{fixed};
            for (const auto* lst : lists) {
                std::vector<uint64_t> next;
                for (uint64_t a : acc)
                    for (uint64_t b : *lst) next.push_back(a | b);
                std::sort(next.begin(), next.end());
                next.erase(std::unique(next.begin(), next.end()), next.end());
                acc = std::move(next);
                if (acc.size() > 4096) acc.resize(4096);
            }
            for (uint64_t m : acc)
                if (insert_minimal(minimal[r.head], m)) grew = true;
        }
    }

    std::map<Atom, std::vector<std::vector<Atom>>> out;
    for (size_t i = 0; i < g.atoms.size(); ++i) {
        if (minimal[i].empty()) continue;
        std::vector<std::vector<Atom>> sets;
        for (uint64_t m : minimal[i]) {
            std::vector<Atom> s;
            for (size_t p = 0; p < g.asm_atoms.size(); ++p)
                if ((m >> p) & 1) s.push_back(g.atoms[g.asm_atoms[p]]);
            std::sort(s.begin(), s.end());
            sets.push_back(std::move(s));
        }
        std::sort(sets.begin(), sets.end());
        out[g.atoms[i]] = std::move(sets);
    }
    return out;
}

std::vector<ExactArgument> exact_arguments(const AbaFramework& framework, size_t cap) {
    GroundedFramework g = ground_framework(framework);
    if (g.asm_atoms.size() > 64)
        throw AssumptionBoundExceeded("too many ground assumptions for support masks");

    std::vector<std::set<uint64_t>> exact(g.atoms.size());
    size_t total = 0;
    for (size_t p = 0; p < g.asm_atoms.size(); ++p) {
        exact[g.asm_atoms[p]].insert(uint64_t(1) << p);
        ++total;
    }
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& r : g.rules) {
            uint64_t fixed = 0;
            std::vector<const std::set<uint64_t>*> lists;
            bool dead = false;
            for (size_t i = 0; i < g.atoms.size() && !dead; ++i) {
                if (r.body_asms.test(static_cast<int>(i)))
                    fixed |= uint64_t(1) << g.asm_pos[i];
                else if (r.body_atoms.test(static_cast<int>(i))) {
                    if (exact[i].empty())
                        dead = true;
                    else
                        lists.push_back(&exact[i]);
                }
            }
            if (dead) continue;
            std::vector<uint64_t> acc{fixed};
            for (const auto* lst : lists) {
                std::vector<uint64_t> next;
                for (uint64_t a : acc)
                    for (uint64_t b : *lst) next.push_back(a | b);
                std::sort(next.begin(), next.end());
                next.erase(std::unique(next.begin(), next.end()), next.end());
                acc = std::move(next);
            }
            for (uint64_t m : acc) {
                if (exact[r.head].insert(m).second) {
                    grew = true;
                    if (++total > cap)
                        throw AssumptionBoundExceeded("exact argument enumeration exceeded cap");
                }
            }
        }
    }

    std::vector<ExactArgument> out;
    for (size_t i = 0; i < g.atoms.size(); ++i) {
        for (uint64_t m : exact[i]) {
            ExactArgument arg;
            arg.claim = g.atoms[i];
            for (size_t p = 0; p < g.asm_atoms.size(); ++p)
                if ((m >> p) & 1) arg.support.push_back(g.atoms[g.asm_atoms[p]]);
            std::sort(arg.support.begin(), arg.support.end());
            out.push_back(std::move(arg));
        }
    }
    std::sort(out.begin(), out.end(), [](const ExactArgument& a, const ExactArgument& b) {
        return std::tie(a.claim, a.support) < std::tie(b.claim, b.support);
    });
    return out;
}

std::vector<std::vector<Atom>>
argument_level_stable_claim_sets(const AbaFramework& framework, size_t max_arguments) {
    std::vector<ExactArgument> args = exact_arguments(framework);
    if (args.size() > max_arguments || args.size() > 20)
        throw AssumptionBoundExceeded("too many arguments for exhaustive extension enumeration");

    size_t n = args.size();
    // att[i]: mask of arguments attacked by argument i
    std::vector<uint64_t> att(n, 0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            for (const auto& a : args[j].support) {
                auto contrary = framework.contrary_of(a);
                if (contrary && args[i].claim == *contrary) {
                    att[i] |= uint64_t(1) << j;
                    break;
                }
            }
        }
    }

    std::set<std::vector<Atom>> claim_sets;
    uint64_t all = n == 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1;
    for (uint64_t d = 0; d <= all; ++d) {
        bool ok = true;
        uint64_t attacked = 0;
        for (size_t i = 0; i < n && ok; ++i)
            if ((d >> i) & 1) {
                if (att[i] & d) ok = false; // conflict inside
                attacked |= att[i];
            }
        if (!ok) continue;
        // every outsider attacked
        if (~d & ~attacked & all) continue;
        std::set<Atom> claims;
        for (size_t i = 0; i < n; ++i)
            if ((d >> i) & 1) claims.insert(args[i].claim);
        claim_sets.insert(std::vector<Atom>(claims.begin(), claims.end()));
    }
    return {claim_sets.begin(), claim_sets.end()};
}

bool is_solution(const AbaFramework& candidate, const LearningProblem& problem,
                 std::string* why, const OracleOptions& opts) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const AbaFramework& bg = problem.background;

    // (i) rule inclusion
    for (const auto& r : bg.rules)
        if (!candidate.has_rule(r)) return fail("background rule missing: " + to_string(r));

    // (ii) new rules with an old head predicate need a learnable predicate
    std::set<std::string> bg_preds = bg.predicates();
    for (const auto& r : candidate.rules) {
        if (bg.has_rule(r)) continue;
        if (bg_preds.count(r.head.pred) && !problem.learnables.count(r.head.pred))
            return fail("new rule heads non-learnable background predicate: " + to_string(r));
    }

    // (iii) assumptions preserved
    for (const auto& a : bg.assumptions) {
        auto s = candidate.assumption_schema(a.pred);
        if (!s || s->arity() != a.arity())
            return fail("assumption dropped: " + to_string(a));
    }

    // (iv) contraries preserved
    for (const auto& [p, c] : bg.contraries) {
        auto it = candidate.contraries.find(p);
        if (it == candidate.contraries.end() || it->second != c)
            return fail("contrary changed for " + p);
    }

    // (v) brave entailment
    if (!bravely_entails(candidate, problem.positives, problem.negatives, nullptr, opts))
        return fail("examples not bravely entailed");
    if (why) why->clear();
    return true;
}

} // namespace aba
