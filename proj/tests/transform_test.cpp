#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aba/oracle.hpp"
#include "aba/parser.hpp"
#include "aba/transform.hpp"
#include "testgen.hpp"

using namespace aba;

namespace {

Term v(const std::string& n) { return Term::variable(n); }
Term c(const std::string& n) { return Term::constant(n); }
Atom ga(const std::string& p, const std::string& arg) { return Atom{p, {c(arg)}}; }

AbaFramework nixon_bk() {
    return parse_framework(read_file(std::string(PROBLEMS_DIR) + "/nixon_bk.aba"));
}

std::vector<FolderRule> foldbase_of(const AbaFramework& fw) {
    std::vector<FolderRule> out;
    for (const auto& r : fw.rules) out.push_back({r, FolderRule::Origin::Background});
    for (const auto& r : fw.dom_facts()) out.push_back({r, FolderRule::Origin::Dom});
    return out;
}

NormalizedRule parse_rule(const std::string& text) {
    AbaFramework fw = parse_framework(text);
    REQUIRE(fw.rules.size() == 1);
    return fw.rules.front();
}

// the example-9 framework, optionally without the p fact
AbaFramework example9(bool with_p_fact) {
    AbaFramework fw;
    fw.universe = {"a", "b"};
    fw.assumptions = {Atom{"r", {v("X1")}}, Atom{"t", {v("X1")}}};
    fw.contraries["r"] = "s";
    fw.contraries["t"] = "p";
    auto add = [&fw](const char* text) {
        AbaFramework tmp = parse_framework(text);
        for (auto& r : tmp.rules) fw.add_rule(r);
    };
    add("p(X) :- q(X), r(X). #assumption r(X). #contrary r(X), s(X).");
    add("s(X) :- q(X), t(X). #assumption t(X). #contrary t(X), p(X).");
    add("q(a).");
    add("q(b).");
    if (with_p_fact) add("p(a).");
    return fw;
}

} // namespace

TEST_CASE("rote learning produces normalised facts") {
    NormalizedRule r = rote_learn(ga("abnormal_quaker", "b"));
    CHECK(to_string(r) == "abnormal_quaker(X1) :- X1=b.");
    NormalizedRule r2 = rote_learn(ga("pacifist", "c"));
    CHECK(to_string(r2) == "pacifist(X1) :- X1=c.");
    NormalizedRule r3 = rote_learn(Atom{"q", {}});
    CHECK(r3.equalities.empty());
    CHECK(is_intensional(r3));
    CHECK_THROWS_AS(rote_learn(ga("votes_dem", "a"), {"votes_dem"}), FlatnessViolation);
}

TEST_CASE("folding a rote fact against the nixon rulebase") {
    auto fw = nixon_bk();
    auto base = foldbase_of(fw);

    SUBCASE("abnormal_quaker(X) :- X=b folds to quaker or republican") {
        auto cands = fold_candidates(rote_learn(ga("abnormal_quaker", "b")), base);
        REQUIRE(!cands.empty());
        std::set<std::string> folded;
        for (const auto& cand : cands) folded.insert(to_string(cand.folded));
        CHECK(folded.count("abnormal_quaker(X1) :- republican(X1)."));
        CHECK(folded.count("abnormal_quaker(X1) :- quaker(X1)."));
        // background folders come before the dom fallback
        CHECK(cands.front().folder.origin == FolderRule::Origin::Background);
    }

    SUBCASE("pacifist(X) :- X=c folds to democrat") {
        auto cands = fold_candidates(rote_learn(ga("pacifist", "c")), base);
        REQUIRE(!cands.empty());
        CHECK(to_string(cands.front().folded) == "pacifist(X1) :- democrat(X1).");
    }

    SUBCASE("a rule never folds with itself") {
        NormalizedRule target = rote_learn(ga("pacifist", "c"));
        std::vector<FolderRule> self = {{target, FolderRule::Origin::Background}};
        CHECK(fold_candidates(target, self).empty());
    }
}

TEST_CASE("apply_folding reaches an intensional rule") {
    auto fw = nixon_bk();
    auto base = foldbase_of(fw);
    auto [folded, trace] =
        apply_folding_first(rote_learn(ga("abnormal_quaker", "b")), base, fw.universe.size());
    CHECK(is_intensional(folded));
    CHECK(trace.steps.size() == 1);
}

TEST_CASE("already intensional rules fold in zero steps") {
    auto fw = nixon_bk();
    auto base = foldbase_of(fw);
    NormalizedRule intensional = parse_rule("pacifist(X) :- democrat(X).");
    auto [folded, trace] = apply_folding_first(intensional, base, fw.universe.size());
    CHECK(same_rule(folded, intensional));
    CHECK(trace.steps.empty());
}

TEST_CASE("a lone constant equality folds with a dom fact") {
    AbaFramework fw;
    fw.universe = {"a", "c"};
    std::vector<FolderRule> base;
    for (const auto& r : fw.dom_facts()) base.push_back({r, FolderRule::Origin::Dom});
    auto [folded, trace] = apply_folding_first(rote_learn(ga("p", "a")), base, 2);
    CHECK(to_string(folded) == "p(X1) :- dom(X1).");
    CHECK(is_intensional(folded));
}

TEST_CASE("fold traces respect the closure bound") {
    std::mt19937 rng(31);
    for (int i = 0; i < 300; ++i) {
        auto fw = testgen::random_framework(rng, {});
        auto base = foldbase_of(fw);
        // random ground fact over the vocabulary
        const std::pair<const char*, int> pool[] = {{"p", 1}, {"q", 1}, {"s", 1}, {"cu", 1}};
        auto [p, ar] = pool[testgen::pick(rng, 0, 3)];
        Atom fact{p, {}};
        for (int k = 0; k < ar; ++k)
            fact.args.push_back(c(fw.universe[testgen::pick(
                rng, 0, static_cast<int>(fw.universe.size()) - 1)]));

        size_t bound = FoldTrace::start(rote_learn(fact), base, fw.universe.size()).bound;
        bool done = apply_folding(rote_learn(fact), base, fw.universe.size(), FoldMode::Bounded,
                                  [&](const NormalizedRule& r, const FoldTrace& t) {
                                      CHECK(is_intensional(r));
                                      CHECK(t.steps.size() <= bound);
                                      return true;
                                  });
        // dom facts guarantee at least one sequence exists
        CHECK(done);
    }
}

TEST_CASE("single folds preserve every exact argument") {
    std::mt19937 rng(77);
    int checked = 0;
    for (int i = 0; i < 500 && checked < 120; ++i) {
        auto fw = testgen::random_framework(
            rng, {.max_universe = 2, .max_rules = 5, .max_assumptions = 2, .allow_arity0 = false});
        std::vector<FolderRule> base;
        for (const auto& r : fw.rules) base.push_back({r, FolderRule::Origin::Background});
        for (const auto& r : fw.dom_facts()) base.push_back({r, FolderRule::Origin::Dom});
        if (fw.rules.empty()) continue;
        const NormalizedRule& target = fw.rules[testgen::pick(
            rng, 0, static_cast<int>(fw.rules.size()) - 1)];
        auto cands = fold_candidates(target, base);
        if (cands.empty()) continue;
        const auto& cand = cands[testgen::pick(rng, 0, static_cast<int>(cands.size()) - 1)];

        AbaFramework after = fw;
        after.remove_rule(target);
        // the folder must stay in the rulebase for the proposition to apply
        if (cand.folder.origin == FolderRule::Origin::Background &&
            !after.has_rule(cand.folder.rule))
            continue;
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
        for (const auto& a : before_args) {
            CHECK(post.count({to_string(a.claim), a.support}));
        }
    }
    CHECK(checked >= 120);
}

TEST_CASE("introduce_assumption threads the contrary map") {
    auto fw = nixon_bk();
    NormalizedRule base = parse_rule("abnormal_quaker(X) :- republican(X).");
    AbaFramework host = fw;
    host.add_rule(base);

    auto res = introduce_assumption(host, base, {v("X")}, "alpha", "c_alpha");
    CHECK(to_string(res.rule) == "abnormal_quaker(X) :- alpha(X), republican(X).");
    CHECK(res.framework.is_assumption_pred("alpha"));
    CHECK(res.framework.contraries.at("alpha") == "c_alpha");
    // prior contraries untouched
    for (const auto& [p, ct] : fw.contraries) CHECK(res.framework.contraries.at(p) == ct);
    CHECK_FALSE(res.framework.has_rule(base));
    CHECK(res.framework.has_rule(res.rule));

    SUBCASE("name collisions are rejected") {
        CHECK_THROWS_AS(introduce_assumption(host, base, {v("X")}, "quaker", "c_q"),
                        NameCollision);
        CHECK_THROWS_AS(introduce_assumption(host, base, {v("X")}, "fresh", "quaker"),
                        NameCollision);
    }

    SUBCASE("reusing an existing assumption keeps its contrary") {
        auto reuse = introduce_assumption(host, base, {v("X")}, "normal_quaker", "");
        CHECK(reuse.framework.contraries.at("normal_quaker") == "abnormal_quaker");
        CHECK(reuse.contrary.pred == "abnormal_quaker");
    }

    SUBCASE("arity-0 tuple appends a propositional assumption") {
        NormalizedRule prop = parse_rule("p :- q.");
        AbaFramework tiny;
        tiny.add_rule(prop);
        auto r0 = introduce_assumption(tiny, prop, {}, "alpha", "c_alpha");
        CHECK(to_string(r0.rule) == "p :- alpha, q.");
    }
}

TEST_CASE("fact subsumption follows brave entailment") {
    std::vector<Atom> pos = {ga("p", "a")};
    std::vector<Atom> neg = {ga("p", "b")};

    SUBCASE("the p fact is removable") {
        auto fw = example9(true);
        auto fact = rote_learn(ga("p", "a"));
        REQUIRE(fw.has_rule(fact));
        auto res = subsume_fact(fw, pos, neg, fact);
        CHECK(res.removed);
        CHECK_FALSE(res.framework.has_rule(fact));
        // and the oracle agrees the remainder entails
        CHECK(bravely_entails(res.framework, pos, neg));
    }

    SUBCASE("q(a) is not removable once the p fact is gone") {
        auto fw = example9(false);
        auto fact = rote_learn(ga("q", "a"));
        auto res = subsume_fact(fw, pos, neg, fact);
        CHECK_FALSE(res.removed);
        CHECK(res.framework.has_rule(fact));
    }
}

TEST_CASE("relative assumptions are found by body match") {
    auto fw = nixon_bk();
    NormalizedRule folded = parse_rule("c_alpha(X) :- quaker(X).");
    auto rel = relative_assumptions(fw.rules, fw, folded);
    REQUIRE(rel.size() == 1);
    CHECK(to_string(rel[0]) == "normal_quaker(X)");

    NormalizedRule other = parse_rule("c_alpha(X) :- republican(X).");
    CHECK(relative_assumptions(fw.rules, fw, other).empty());
}
