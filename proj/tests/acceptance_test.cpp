// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "aba/aspcore2.hpp"
#include "aba/learner.hpp"
#include "aba/oracle.hpp"
#include "aba/parser.hpp"
#include "aba/solver.hpp"
#include "aba/transform.hpp"
#include "testgen.hpp"

using namespace aba;

namespace {

Term v(const std::string& n) { return Term::variable(n); }
Term c(const std::string& n) { return Term::constant(n); }
Atom ga(const std::string& p, const std::string& arg) { return Atom{p, {c(arg)}}; }

LearningProblem load(const std::string& name) {
    return parse_problem(read_file(std::string(PROBLEMS_DIR) + "/" + name));
}

struct Criterion {
    int number;
    std::string name;
    std::function<bool(std::string&)> check;
    double limit_secs; // 0: no limit asserted
};

// ---- criterion 1: nixon end-to-end ------------------------------------------

bool nixon_end_to_end(std::string& detail) {
    auto problem = load("nixon_diamond.aba");
    auto outcome = learn(problem);
    if (!outcome.success() || !outcome.intensional) {
        detail = "learning did not produce an intensional solution";
        return false;
    }
    if (!is_solution(outcome.framework, problem, &detail)) return false;

    std::string asm_name;
    for (const auto& [p, ct] : outcome.framework.contraries)
        if (!problem.background.contraries.count(p)) asm_name = p;
    if (asm_name.empty()) {
        detail = "no fresh assumption introduced";
        return false;
    }
    std::string contrary = outcome.framework.contraries.at(asm_name);

    auto key = [](const std::string& text) {
        return canonical_key(parse_framework(text).rules.front());
    };
    std::set<std::string> expected = {
        key("abnormal_quaker(X) :- republican(X), " + asm_name + "(X)."),
        key(contrary + "(X) :- quaker(X), normal_quaker(X)."),
        key("pacifist(X) :- democrat(X)."),
    };
    std::set<std::string> got;
    for (const auto& r : new_rules(outcome.framework, problem.background))
        got.insert(canonical_key(r));
    if (got != expected) {
        detail = "learned rules differ from the worked solution";
        return false;
    }
    for (const auto& r : problem.background.rules)
        if (!outcome.framework.has_rule(r)) {
            detail = "a background rule went missing";
            return false;
        }
    detail = "intensional solution matches modulo renaming of " + asm_name;
    return true;
}

// ---- criterion 2: rote-learning minimality -----------------------------------

bool role_minimality(std::string& detail) {
    auto problem = load("nixon_diamond.aba");
    auto outcome = learn(problem);
    if (!outcome.success()) {
        detail = "learning failed";
        return false;
    }
    std::set<std::string> facts;
    for (const auto& a : outcome.rote_facts) facts.insert(to_string(a));
    if (facts != std::set<std::string>{"abnormal_quaker(b)", "pacifist(c)"}) {
        detail = "rote-learned fact set is not {abnormal_quaker(b), pacifist(c)}";
        return false;
    }

    // brute-force minimum over learnable fact subsets by ascending size
    std::vector<Atom> candidates;
    for (const auto& [p, ar] : problem.learnables)
        for (const auto& u : problem.background.universe) candidates.push_back(ga(p, u));
    size_t n = candidates.size();
    if ((uint64_t(1) << n) > 1024) {
        detail = "candidate space unexpectedly large";
        return false;
    }
    auto works = [&](uint64_t mask) {
        AbaFramework fw = problem.background;
        for (size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) fw.add_rule(rote_learn(candidates[i]));
        return is_solution(fw, problem);
    };
    int minimum = -1;
    for (int size = 0; size <= 2 && minimum < 0; ++size) {
        for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
            if (__builtin_popcountll(mask) != size) continue;
            if (works(mask)) {
                minimum = size;
                break;
            }
        }
    }
    if (minimum != 2) {
        detail = "brute-force minimum is " + std::to_string(minimum) + ", expected 2";
        return false;
    }
    detail = "fact set {abnormal_quaker(b), pacifist(c)}, minimum size 2 confirmed";
    return true;
}

// ---- criteria 3 and 4: theorem 1 and the extension bijection -----------------

struct Corpus {
    std::vector<AbaFramework> frameworks;
    std::vector<std::pair<std::vector<Atom>, std::vector<Atom>>> examples;
};

Corpus& corpus() {
    static Corpus corpus_ = [] {
        Corpus c;
        std::mt19937 rng(20240501);
        const std::pair<const char*, int> pool[] = {{"p", 1}, {"q", 1}, {"s", 1}, {"r", 0}};
        while (c.frameworks.size() < 500) {
            auto fw = testgen::random_framework(rng, {});
            std::vector<Atom> pos, neg;
            int ne = testgen::pick(rng, 0, 2);
            for (int k = 0; k < ne; ++k) {
                auto [p, ar] = pool[testgen::pick(rng, 0, 3)];
                Atom a{p, {}};
                for (int j = 0; j < ar; ++j)
                    a.args.push_back(Term::constant(fw.universe[testgen::pick(
                        rng, 0, static_cast<int>(fw.universe.size()) - 1)]));
                (testgen::chance(rng, 0.5) ? pos : neg).push_back(a);
            }
            c.frameworks.push_back(std::move(fw));
            c.examples.push_back({std::move(pos), std::move(neg)});
        }
        return c;
    }();
    return corpus_;
}

bool theorem1_suite(std::string& detail) {
    auto& c = corpus();
    int mismatches = 0;
    for (size_t i = 0; i < c.frameworks.size(); ++i) {
        const auto& [pos, neg] = c.examples[i];
        bool enc = is_satisfiable(encode_entailment(c.frameworks[i], pos, neg));
        bool ora = bravely_entails(c.frameworks[i], pos, neg);
        if (enc != ora) ++mismatches;
    }
    detail = std::to_string(c.frameworks.size()) + " instances, " + std::to_string(mismatches) +
             " discrepancies";
    return mismatches == 0;
}

bool bijection_suite(std::string& detail) {
    auto& c = corpus();
    int mismatches = 0;
    for (const auto& fw : c.frameworks) {
        auto sets = answer_sets(translate_framework(fw), 1 << 14);
        auto exts = stable_extensions(fw);
        if (sets.size() != exts.size()) {
            ++mismatches;
            continue;
        }
        auto project_asp = [&](const AnswerSet& s) {
            std::set<std::string> out;
            for (const auto& a : s.atoms) {
                if (a.pred == kDomPred || is_internal_pred(a.pred) ||
                    fw.is_assumption_pred(a.pred))
                    continue;
                out.insert(to_string(a));
            }
            return out;
        };
        auto project_ext = [&](const Extension& e) {
            std::set<std::string> out;
            for (const auto& a : e.claims) {
                if (a.pred == kDomPred || fw.is_assumption_pred(a.pred)) continue;
                out.insert(to_string(a));
            }
            return out;
        };
        std::set<std::set<std::string>> lhs, rhs;
        for (const auto& s : sets) lhs.insert(project_asp(s));
        for (const auto& e : exts) rhs.insert(project_ext(e));
        if (lhs != rhs || lhs.size() != sets.size()) ++mismatches;
    }
    detail = std::to_string(c.frameworks.size()) + " frameworks, " + std::to_string(mismatches) +
             " discrepancies";
    return mismatches == 0;
}

// ---- criterion 5: proposition 1 ----------------------------------------------

bool proposition1_suite(std::string& detail) {
    std::mt19937 rng(515151);
    int checked = 0, violations = 0, guard = 0;
    while (checked < 200 && ++guard < 4000) {
        auto fw = testgen::random_framework(
            rng, {.max_universe = 2, .max_rules = 5, .max_assumptions = 2, .allow_arity0 = false});
        if (fw.rules.empty()) continue;
        std::vector<FolderRule> base;
        for (const auto& r : fw.rules) base.push_back({r, FolderRule::Origin::Background});
        for (const auto& r : fw.dom_facts()) base.push_back({r, FolderRule::Origin::Dom});
        const auto& target =
            fw.rules[testgen::pick(rng, 0, static_cast<int>(fw.rules.size()) - 1)];
        auto cands = fold_candidates(target, base);
        if (cands.empty()) continue;
        const auto& cand = cands[testgen::pick(rng, 0, static_cast<int>(cands.size()) - 1)];

        AbaFramework after = fw;
        after.remove_rule(target);
        after.add_rule(cand.folded);

        std::vector<ExactArgument> before_args, after_args;
        try {
            before_args = exact_arguments(fw, 4000);
            after_args = exact_arguments(after, 4000);
        } catch (const AssumptionBoundExceeded&) {
            continue;
        }
        ++checked;
        std::set<std::pair<std::string, std::vector<Atom>>> post;
        for (const auto& a : after_args) post.insert({to_string(a.claim), a.support});
        for (const auto& a : before_args)
            if (!post.count({to_string(a.claim), a.support})) {
                ++violations;
                break;
            }
    }

    // the worked self-attack example must lose all stable extensions
    AbaFramework ex7;
    ex7.universe = {"a"};
    ex7.assumptions = {Atom{"r", {v("X1")}}};
    ex7.contraries["r"] = "p";
    {
        RawRule r1;
        r1.head = Atom{"p", {v("X")}};
        r1.body = {Atom{"s", {v("X")}}, Atom{"r", {v("X")}}};
        RawRule r2;
        r2.head = Atom{"s", {c("a")}};
        RawRule r3;
        r3.head = Atom{"s", {v("X")}};
        r3.body = {Atom{"q", {v("X")}}};
        ex7.rules = {normalize(r1), normalize(r2), normalize(r3)};
        sort_canonically(ex7.rules);
    }
    bool ex7_ok = stable_extensions(ex7).empty();

    detail = std::to_string(checked) + " folds, " + std::to_string(violations) +
             " violations; post-fold extension collapse " + (ex7_ok ? "confirmed" : "WRONG");
    return checked >= 200 && violations == 0 && ex7_ok;
}

// ---- criterion 6: proposition 3 and termination -------------------------------

bool termination_suite(std::string& detail) {
    std::mt19937 rng(606060);
    int rules_checked = 0, bound_violations = 0;
    const std::pair<const char*, int> pool[] = {{"p", 1}, {"q", 1}, {"s", 1}, {"cu", 1}};
    for (int i = 0; i < 1000; ++i) {
        auto fw = testgen::random_framework(rng, {});
        std::vector<FolderRule> base;
        for (const auto& r : fw.rules) base.push_back({r, FolderRule::Origin::Background});
        for (const auto& r : fw.dom_facts()) base.push_back({r, FolderRule::Origin::Dom});
        auto [p, ar] = pool[testgen::pick(rng, 0, 3)];
        Atom fact{p, {}};
        for (int k = 0; k < ar; ++k)
            fact.args.push_back(Term::constant(
                fw.universe[testgen::pick(rng, 0, static_cast<int>(fw.universe.size()) - 1)]));
        NormalizedRule target = rote_learn(fact);
        size_t bound = FoldTrace::start(target, base, fw.universe.size()).bound;
        try {
            bool reached = apply_folding(target, base, fw.universe.size(), FoldMode::Bounded,
                                         [&](const NormalizedRule& r, const FoldTrace& t) {
                                             if (!is_intensional(r) || t.steps.size() > bound)
                                                 ++bound_violations;
                                             return true;
                                         });
            if (!reached) ++bound_violations; // dom folds guarantee a sequence
        } catch (const std::logic_error&) {
            ++bound_violations;
        }
        ++rules_checked;
    }

    // mode-B learning halts on every corpus problem, invariants asserted
    int corpus_ok = 0, corpus_total = 0;
    for (const auto& entry : std::filesystem::directory_iterator(PROBLEMS_DIR)) {
        if (entry.path().extension() != ".aba") continue;
        auto problem = parse_problem(read_file(entry.path().string()));
        if (problem.learnables.empty()) continue;
        ++corpus_total;
        LearnerOptions opts;
        opts.paranoid_checks = true;
        try {
            auto outcome = learn(problem, opts);
            (void)outcome;
            ++corpus_ok;
        } catch (const std::logic_error&) {
        }
    }
    detail = std::to_string(rules_checked) + " fold runs, " + std::to_string(bound_violations) +
             " bound violations; " + std::to_string(corpus_ok) + "/" +
             std::to_string(corpus_total) + " corpus problems halted cleanly";
    return bound_violations == 0 && corpus_ok == corpus_total && corpus_total >= 7;
}

// ---- criterion 7: theorem 6 completeness --------------------------------------

bool completeness_suite(std::string& detail) {
    std::mt19937 rng(707070);
    int checked = 0, mismatches = 0, brute_checked = 0;
    while (checked < 200) {
        auto problem = testgen::random_problem(
            rng, {.framework = {.max_universe = 3, .max_rules = 8, .max_assumptions = 2},
                  .max_examples = 2,
                  .max_learnables = 2});
        ++checked;
        bool sat = is_satisfiable(encode_learning(problem.background, problem.positives,
                                                  problem.negatives, problem.learnables));
        LearnerOptions opts;
        opts.mode = LearnMode::BE;
        auto outcome = learn(problem, opts);
        if (outcome.success() != sat) ++mismatches;
        if (outcome.success() && !is_solution(outcome.framework, problem)) ++mismatches;
        try {
            if (testgen::brute_force_solution_exists(problem) != sat) ++mismatches;
            ++brute_checked;
        } catch (const std::runtime_error&) {
        }
    }
    detail = std::to_string(checked) + " problems (" + std::to_string(brute_checked) +
             " brute-forced), " + std::to_string(mismatches) + " discrepancies";
    return mismatches == 0;
}

// ---- criterion 8: desk-scale benchmark harness ---------------------------------

bool bench_suite(std::string& detail) {
    const char* names[] = {"flies.aba",           "flies_birds_planes.aba",
                           "innocent.aba",        "nixon_diamond.aba",
                           "nixon_diamond_2.aba", "tax_law.aba",
                           "tax_law_2.aba"};
    std::ostringstream report;
    bool ok = true;
    for (const char* name : names) {
        auto t0 = std::chrono::steady_clock::now();
        LearningProblem problem;
        try {
            problem = load(name);
        } catch (const std::exception& e) {
            report << name << ": " << e.what() << "; ";
            ok = false;
            continue;
        }
        auto outcome = learn(problem);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool good = outcome.success() && outcome.intensional && secs < 60.0 &&
                    is_solution(outcome.framework, problem);
        if (!good) ok = false;
        report << std::filesystem::path(name).stem().string() << "="
               << (outcome.success() ? (outcome.intensional ? "intensional" : "non-intensional")
                                     : "failed")
               << " ";
    }
    detail = report.str();
    return ok;
}

// ---- criterion 9: solver oracle equivalence ------------------------------------

bool solver_equivalence(std::string& detail) {
    std::mt19937 rng(909090);
    int checked = 0, mismatches = 0;
    while (checked < 1000) {
        auto prog = testgen::random_ground_program(
            rng, {.max_atoms = 7, .max_rules = 10, .with_choice = true, .with_minimize = true});
        GroundAspProgram gp = ground(prog);
        if (gp.atoms.size() > 12) continue;
        ++checked;

        auto brute = testgen::brute_force_models(gp);
        std::set<int> min_atoms(gp.minimize_atoms.begin(), gp.minimize_atoms.end());
        int best = -1;
        std::vector<std::pair<int, std::set<std::string>>> models;
        for (const auto& m : brute) {
            std::set<std::string> proj;
            int cost = 0;
            for (int a : m) {
                if (min_atoms.count(a)) ++cost;
                if (!gp.atoms[a].pred.starts_with(kComplementPrefix))
                    proj.insert(to_string(gp.atoms[a]));
            }
            if (best < 0 || cost < best) best = cost;
            models.push_back({cost, std::move(proj)});
        }
        std::set<std::set<std::string>> expected;
        for (auto& [cost, m] : models)
            if (gp.minimize_atoms.empty() || cost == best) expected.insert(std::move(m));

        auto sets = answer_sets(gp, 1 << 14);
        std::set<std::set<std::string>> got;
        bool cost_ok = true;
        for (const auto& s : sets) {
            std::set<std::string> proj;
            for (const auto& a : s.atoms) proj.insert(to_string(a));
            got.insert(std::move(proj));
            if (!gp.minimize_atoms.empty() && s.cost != best) cost_ok = false;
        }
        if (got != expected || !cost_ok) ++mismatches;
    }
    detail = std::to_string(checked) + " programs, " + std::to_string(mismatches) +
             " discrepancies";
    return mismatches == 0;
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "nixon end-to-end intensional solution", nixon_end_to_end, 5.0},
        {2, "rote-learning minimality on nixon", role_minimality, 10.0},
        {3, "entailment encoding vs oracle (500 random frameworks)", theorem1_suite, 60.0},
        {4, "stable-extension bijection on the same corpus", bijection_suite, 0.0},
        {5, "argument preservation across folds (200 folds)", proposition1_suite, 0.0},
        {6, "fold termination bounds and corpus halting", termination_suite, 0.0},
        {7, "enumerating-mode completeness (200 problems)", completeness_suite, 0.0},
        {8, "desk-scale benchmark problems", bench_suite, 0.0},
        {9, "solver vs exhaustive reduct enumeration (1000 programs)", solver_equivalence, 0.0},
    };

    int failures = 0;
    for (auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_secs > 0 && secs > c.limit_secs) {
            ok = false;
            detail += " [over the " + std::to_string(c.limit_secs) + "s limit]";
        }
        std::printf("criterion %d (%s): %s  [%.2fs] %s\n", c.number, c.name.c_str(),
                    ok ? "PASS" : "FAIL", secs, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
