#include "aba/learner.hpp"

#include <algorithm>
#include <chrono>

#include "aba/oracle.hpp"
#include "aba/solver.hpp"
#include "aba/transform.hpp"

namespace aba {

SolveBackend internal_backend() {
    return [](const AspProgram& p, size_t limit) { return answer_sets(p, limit); };
}

std::vector<NormalizedRule> new_rules(const AbaFramework& result, const AbaFramework& background) {
    std::vector<NormalizedRule> out;
    for (const auto& r : result.rules)
        if (!background.has_rule(r)) out.push_back(r);
    sort_canonically(out);
    return out;
}

namespace {

struct GenState {
    AbaFramework fw;                 // current R, A, contraries
    std::deque<NormalizedRule> rl;   // learned non-intensional facts, FIFO
    int fresh_counter = 0;
    std::vector<TraceRecord> trace;
};

// variables of the folded body, ordered by first occurrence
std::vector<Term> body_var_tuple(const NormalizedRule& rule) {
    std::vector<Term> out;
    std::set<std::string> seen;
    auto add = [&](const Term& t) {
        if (t.is_var() && seen.insert(t.name).second) out.push_back(t);
    };
    for (const auto& a : rule.body)
        for (const auto& t : a.args) add(t);
    for (const auto& e : rule.equalities) {
        add(e.lhs);
        add(e.rhs);
    }
    return out;
}

class Runner {
public:
    Runner(const LearningProblem& problem, const LearnerOptions& opts)
        : problem_(problem), opts_(opts),
          backend_(opts.backend ? opts.backend : internal_backend()) {}

    LearnOutcome run() {
        auto t0 = std::chrono::steady_clock::now();
        LearnOutcome out;

        AspProgram role = encode_learning(problem_.background, problem_.positives,
                                          problem_.negatives, problem_.learnables,
                                          opts_.rote_encoding);
        auto sets = solve_many(role);
        if (sets.empty()) {
            out.status = LearnOutcome::Status::NoSolution;
            out.detail = "the learning encoding is unsatisfiable: no solution exists";
        } else {
            for (const auto& s : sets) {
                GenState state;
                state.fw = problem_.background;
                auto facts = decode_facts(s, problem_.learnables);
                for (const auto& f : facts) {
                    state.fw.add_constants_from(f);
                    state.rl.push_back(f);
                    state.trace.push_back({"R1", to_string(f), "rote learning"});
                }
                GenState final;
                if (gen(std::move(state), final)) {
                    out.status = LearnOutcome::Status::Success;
                    out.framework = final.fw;
                    out.trace = std::move(final.trace);
                    out.rote_facts.clear();
                    for (const auto& a : s.atoms)
                        if (is_primed(a.pred)) out.rote_facts.push_back(Atom{unprimed(a.pred), a.args});
                    bool intensional = true;
                    for (const auto& r : new_rules(out.framework, problem_.background))
                        intensional = intensional && is_intensional(r);
                    out.intensional = intensional;
                    break;
                }
                ++stats_.backtracks;
            }
            if (!out.success()) {
                out.status = LearnOutcome::Status::Failure;
                out.detail = "all choice points exhausted";
            }
        }

        stats_.wall_ms = static_cast<long>(
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                .count());
        out.stats = stats_;
#ifndef NDEBUG
        if (out.success()) {
            std::string why;
            if (!is_solution(out.framework, problem_, &why))
                throw std::logic_error("learner produced a non-solution: " + why);
        }
#endif
        return out;
    }

private:
    bool sat(const AspProgram& p) {
        ++stats_.solver_calls;
        return !backend_(p, 1).empty();
    }

    std::vector<AnswerSet> solve_many(const AspProgram& p) {
        ++stats_.solver_calls;
        return backend_(p, opts_.answer_set_cap);
    }

    AbaFramework with_learned(const AbaFramework& fw, const std::deque<NormalizedRule>& rl) const {
        AbaFramework out = fw;
        for (const auto& r : rl) out.add_rule(r);
        return out;
    }

    std::string fresh_pred(GenState& state, const std::string& base) {
        auto taken = [&](const std::string& name) {
            if (state.fw.predicates().count(name)) return true;
            for (const auto& [p, n] : problem_.learnables)
                if (p == name) return true;
            return false;
        };
        while (true) {
            ++state.fresh_counter;
            std::string name = base + std::to_string(state.fresh_counter);
            if (!taken(name) && !taken("c_" + name)) return name;
        }
    }

    bool gen(GenState state, GenState& out) {
        if (opts_.paranoid_checks) {
            AbaFramework whole = with_learned(state.fw, state.rl);
            if (!bravely_entails(whole, problem_.positives, problem_.negatives))
                throw std::logic_error("gen loop invariant broken: current framework is not a solution");
        }
        if (state.rl.empty()) {
            out = std::move(state);
            return true;
        }

        NormalizedRule rho = state.rl.front();
        state.rl.pop_front();
        AbaFramework rt = with_learned(state.fw, state.rl);

        // fact subsumption: drop rho when the rest still entails the examples
        if (sat(encode_entailment(rt, problem_.positives, problem_.negatives))) {
            state.trace.push_back({"R4", to_string(rho), "fact subsumed"});
            return gen(std::move(state), out);
        }

        // folding over R + R_l minus the target, plus the implicit dom facts
        std::vector<FolderRule> foldbase;
        for (const auto& r : state.fw.rules)
            foldbase.push_back({r, FolderRule::Origin::Background});
        for (const auto& r : state.rl)
            foldbase.push_back({r, FolderRule::Origin::Learned});
        for (const auto& r : state.fw.dom_facts())
            foldbase.push_back({r, FolderRule::Origin::Dom});

        FoldStats fstats;
        FoldMode fmode = opts_.mode == LearnMode::BE ? FoldMode::Enumerating : FoldMode::Bounded;
        bool found = apply_folding(
            rho, foldbase, state.fw.universe.size(), fmode,
            [&](const NormalizedRule& folded, const FoldTrace& ftrace) {
                return process_folded(state, rt, rho, folded, ftrace, out);
            },
            &fstats);
        stats_.folds += fstats.folds;
        return found;
    }

    bool process_folded(const GenState& state, const AbaFramework& rt, const NormalizedRule& rho,
                        const NormalizedRule& folded, const FoldTrace& ftrace, GenState& out) {
        AbaFramework with_folded = rt;
        with_folded.add_rule(folded);
        if (sat(encode_entailment(with_folded, problem_.positives, problem_.negatives))) {
            GenState st = state;
            st.fw.add_rule(folded);
            note_folds(st, rho, ftrace);
            if (ftrace.steps.empty() && !is_intensional(folded))
                st.trace.push_back({"R1", to_string(folded), "kept non-intensional (enumerating mode)"});
            if (gen(std::move(st), out)) return true;
            ++stats_.backtracks;
            return false;
        }
        return asm_intro(state, rt, rho, folded, ftrace, out);
    }

    bool asm_intro(const GenState& state, const AbaFramework& rt, const NormalizedRule& rho,
                   const NormalizedRule& folded, const FoldTrace& ftrace, GenState& out) {
        std::vector<Term> tuple = body_var_tuple(folded);

        auto relatives = relative_assumptions(rt.rules, state.fw, folded);
        if (!relatives.empty()) {
            for (const auto& alpha : relatives) {
                NormalizedRule defeasible = folded;
                defeasible.body.push_back(alpha);
                std::sort(defeasible.body.begin(), defeasible.body.end());

                AbaFramework test = rt;
                test.add_rule(defeasible);
                if (!sat(encode_entailment(test, problem_.positives, problem_.negatives)))
                    continue; // fail: try the next relative assumption

                GenState st = state;
                st.fw.add_rule(defeasible);
                note_folds(st, rho, ftrace);
                st.trace.push_back({"R3", to_string(defeasible),
                                    "reused assumption " + to_string(alpha)});
                if (gen(std::move(st), out)) return true;
                ++stats_.backtracks;
            }
            return false; // backtrack into the fold choice
        }

        // fresh assumption; the contrary facts are computed by the solver
        GenState named = state;
        std::string asm_name = fresh_pred(named, "alpha");
        std::string contrary_name = "c_" + asm_name;

        AsmIntroResult intro =
            introduce_assumption(with_rule(rt, folded), folded, tuple, asm_name, contrary_name);
        std::map<std::string, int> transient{{contrary_name, static_cast<int>(tuple.size())}};
        EncodingOptions eopts;
        eopts.domain_restriction = opts_.restrict_contrary_domain;
        auto sets = solve_many(encode_learning(intro.framework, problem_.positives,
                                               problem_.negatives, transient, eopts));
        for (const auto& s : sets) {
            GenState st = named;
            st.fw.assumptions.push_back(*intro.framework.assumption_schema(asm_name));
            st.fw.contraries[asm_name] = contrary_name;
            NormalizedRule defeasible = intro.rule;
            st.fw.add_rule(defeasible);
            note_folds(st, rho, ftrace);
            st.trace.push_back({"R3", to_string(defeasible), "fresh assumption " + asm_name});
            for (const auto& f : decode_facts(s, transient)) {
                st.fw.add_constants_from(f);
                st.rl.push_back(f);
                st.trace.push_back({"R1", to_string(f), "contrary fact"});
            }
            if (gen(std::move(st), out)) return true;
            ++stats_.backtracks;
        }
        return false;
    }

    static AbaFramework with_rule(const AbaFramework& fw, const NormalizedRule& r) {
        AbaFramework out = fw;
        out.add_rule(r);
        return out;
    }

    void note_folds(GenState& st, const NormalizedRule& rho, const FoldTrace& ftrace) const {
        for (const auto& step : ftrace.steps)
            st.trace.push_back({"R2", to_string(step.after),
                                "folded " + to_string(step.before) + " using " +
                                    to_string(step.folder)});
        (void)rho;
    }

    const LearningProblem& problem_;
    LearnerOptions opts_;
    SolveBackend backend_;
    LearnStats stats_;
};

} // namespace

LearnOutcome learn(const LearningProblem& problem, const LearnerOptions& opts) {
    return Runner(problem, opts).run();
}

} // namespace aba
