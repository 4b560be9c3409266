// abalearn: learn flat ABA frameworks from examples under brave reasoning
// with stable-extension semantics.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aba/aspcore2.hpp"
#include "aba/encoding.hpp"
#include "aba/learner.hpp"
#include "aba/oracle.hpp"
#include "aba/parser.hpp"
#include "aba/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoSolution = 1;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;

aba::SolveBackend make_backend(const std::string& spec) {
    if (spec == "internal" || spec.empty()) return aba::internal_backend();
    if (spec.rfind("external:", 0) == 0) return aba::external_backend(spec.substr(9));
    throw CLI::ValidationError("--solver", "expected internal or external:PATH");
}

nlohmann::json stats_json(const std::string& problem, const std::string& mode,
                          const aba::LearnOutcome& outcome, const aba::AbaFramework& background) {
    nlohmann::json j;
    j["problem"] = problem;
    j["mode"] = mode;
    j["outcome"] = outcome.success() ? "success"
                   : outcome.status == aba::LearnOutcome::Status::NoSolution ? "no-solution"
                                                                             : "failure";
    j["intensional"] = outcome.intensional;
    j["learned_rules"] =
        outcome.success() ? aba::new_rules(outcome.framework, background).size() : 0;
    size_t new_asms = 0;
    if (outcome.success())
        for (const auto& a : outcome.framework.assumptions) {
            bool old = false;
            for (const auto& b : background.assumptions) old = old || a.pred == b.pred;
            if (!old) ++new_asms;
        }
    j["new_assumptions"] = new_asms;
    j["solver_calls"] = outcome.stats.solver_calls;
    j["backtracks"] = outcome.stats.backtracks;
    j["wall_ms"] = outcome.stats.wall_ms;
    return j;
}

int run_learn(const std::string& path, const std::string& mode, const std::string& solver,
              bool trace, bool stats, bool verify) {
    aba::LearningProblem problem = aba::parse_problem(aba::read_file(path));

    aba::LearnerOptions opts;
    opts.mode = mode == "be" ? aba::LearnMode::BE : aba::LearnMode::B;
    opts.backend = make_backend(solver);
    aba::LearnOutcome outcome = aba::learn(problem, opts);

    if (trace)
        for (const auto& t : outcome.trace)
            std::cerr << t.kind << "  " << t.rule << "   % " << t.detail << "\n";

    int rc = kExitOk;
    if (outcome.success()) {
        bool confirmed = true;
        std::string why;
        if (verify) confirmed = aba::is_solution(outcome.framework, problem, &why);
        if (confirmed) {
            std::cout << aba::print_framework(outcome.framework);
        } else {
            std::cerr << "verification failed: " << why << "\n";
            rc = kExitNoSolution;
        }
    } else {
        std::cerr << (outcome.status == aba::LearnOutcome::Status::NoSolution
                          ? "no solution exists: "
                          : "learning failed: ")
                  << outcome.detail << "\n";
        rc = kExitNoSolution;
    }
    if (stats)
        std::cout << stats_json(std::filesystem::path(path).stem().string(), mode, outcome,
                                problem.background)
                         .dump()
                  << "\n";
    return rc;
}

int run_verify(const std::string& framework_path, const std::string& problem_path) {
    aba::AbaFramework candidate = aba::parse_framework(aba::read_file(framework_path));
    aba::LearningProblem problem = aba::parse_problem(aba::read_file(problem_path));
    std::string why;
    if (aba::is_solution(candidate, problem, &why)) {
        std::cout << "solution\n";
        return kExitOk;
    }
    std::cout << "not a solution: " << why << "\n";
    return kExitNoSolution;
}

int run_solve(const std::string& framework_path, int limit) {
    aba::AbaFramework fw = aba::parse_framework(aba::read_file(framework_path));
    auto extensions = aba::stable_extensions(fw);
    int shown = 0;
    for (const auto& ext : extensions) {
        if (limit >= 0 && shown >= limit) break;
        bool first = true;
        for (const auto& c : ext.claims) {
            if (c.pred == aba::kDomPred) continue; // implicit domain facts
            std::cout << (first ? "" : " ") << aba::to_string(c);
            first = false;
        }
        std::cout << "\n";
        ++shown;
    }
    if (extensions.empty()) std::cout << "UNSATISFIABLE\n";
    return kExitOk;
}

int run_encode(const std::string& problem_path) {
    aba::LearningProblem problem = aba::parse_problem(aba::read_file(problem_path));
    std::cout << aba::emit_aspcore2(aba::encode_learning(
        problem.background, problem.positives, problem.negatives, problem.learnables));
    return kExitOk;
}

int run_asp_solve(size_t limit) {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    aba::AspProgram prog = aba::parse_aspcore2(ss.str());
    auto sets = aba::answer_sets(prog, limit);
    if (sets.empty()) {
        std::cout << "UNSATISFIABLE\n";
        return kExitNoSolution;
    }
    for (const auto& s : sets) {
        bool first = true;
        for (const auto& a : s.atoms) {
            std::cout << (first ? "" : " ") << aba::to_string(a);
            first = false;
        }
        std::cout << "\n";
    }
    return kExitOk;
}

int run_bench(const std::string& self, const std::string& suite, int timeout_secs) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(suite))
        if (entry.path().extension() == ".aba") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "no .aba problems under " << suite << "\n";
        return kExitUsage;
    }

    std::printf("%-22s %5s %5s %5s %10s  %s\n", "problem", "|BK|", "|E+|", "|E-|", "time",
                "outcome");
    bool all_ok = true;
    for (const auto& f : files) {
        aba::LearningProblem problem;
        try {
            problem = aba::parse_problem(aba::read_file(f.string()));
        } catch (const std::exception& e) {
            std::printf("%-22s %s\n", f.stem().c_str(), e.what());
            all_ok = false;
            continue;
        }
        std::string cmd = "timeout " + std::to_string(timeout_secs) + " " + self +
                          " learn --problem " + f.string() + " --stats json 2>/dev/null";
        auto t0 = std::chrono::steady_clock::now();
        FILE* pipe = ::popen(cmd.c_str(), "r");
        std::string output;
        if (pipe) {
            char buf[4096];
            size_t n;
            while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
            ::pclose(pipe);
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        std::string outcome = "timeout";
        auto nl = output.find_last_of('{');
        if (nl != std::string::npos) {
            try {
                auto j = nlohmann::json::parse(output.substr(nl));
                outcome = j.value("outcome", "error");
                if (j.value("intensional", false)) outcome += ", intensional";
            } catch (...) {
                outcome = "error";
            }
        }
        if (outcome.rfind("success", 0) != 0) all_ok = false;
        std::printf("%-22s %5zu %5zu %5zu %9.2fs  %s\n", f.stem().c_str(),
                    problem.background.rules.size(), problem.positives.size(),
                    problem.negatives.size(), secs, outcome.c_str());
    }
    return all_ok ? kExitOk : kExitNoSolution;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"learning of flat assumption-based argumentation frameworks"};
    app.require_subcommand(1);

    std::string problem_path, framework_path, mode = "b", solver = "internal", stats_fmt;
    bool trace = false, verify = false;
    int limit = -1;
    int timeout_secs = 60;
    std::string suite;
    size_t asp_limit = 64;

    auto* learn = app.add_subcommand("learn", "learn an intensional framework from a problem file");
    learn->add_option("--problem", problem_path, "problem file")->required();
    learn->add_option("--mode", mode, "b (bounded) or be (enumerating)")
        ->check(CLI::IsMember({"b", "be"}));
    learn->add_option("--solver", solver, "internal or external:PATH");
    learn->add_flag("--trace", trace, "print the transformation log to stderr");
    learn->add_option("--stats", stats_fmt, "print run statistics (json)")
        ->check(CLI::IsMember({"json"}));
    learn->add_flag("--verify", verify, "re-check the result with the argumentation oracle");

    auto* verify_cmd = app.add_subcommand("verify", "check a framework against a problem");
    verify_cmd->add_option("--framework", framework_path, "framework file")->required();
    verify_cmd->add_option("--problem", problem_path, "problem file")->required();

    auto* solve = app.add_subcommand("solve", "enumerate stable extensions of a framework");
    solve->add_option("--framework", framework_path, "framework file")->required();
    solve->add_option("--limit", limit, "maximum number of extensions to print");

    auto* encode = app.add_subcommand("encode", "print the ASP encoding of a problem");
    encode->add_option("--problem", problem_path, "problem file")->required();

    auto* bench = app.add_subcommand("bench", "run a directory of problems with a timeout");
    bench->add_option("--suite", suite, "directory of .aba problems")->required();
    bench->add_option("--timeout-secs", timeout_secs, "per-problem timeout");

    auto* asp = app.add_subcommand("asp-solve",
                                   "read an ASP program on stdin, print optimal answer sets");
    asp->add_option("--limit", asp_limit, "maximum number of answer sets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (learn->parsed())
            return run_learn(problem_path, mode, solver, trace, stats_fmt == "json", verify);
        if (verify_cmd->parsed()) return run_verify(framework_path, problem_path);
        if (solve->parsed()) return run_solve(framework_path, limit);
        if (encode->parsed()) return run_encode(problem_path);
        if (bench->parsed()) return run_bench(argv[0], suite, timeout_secs);
        if (asp->parsed()) return run_asp_solve(asp_limit);
    } catch (const aba::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitUsage;
}
