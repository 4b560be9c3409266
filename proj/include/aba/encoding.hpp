#pragma once

#include <map>
#include <string>
#include <vector>

#include "aba/asp.hpp"
#include "aba/framework.hpp"

namespace aba {

struct EncodingOptions {
    // narrow the choice guard of a contrary-of-assumption learnable to the
    // connected non-assumption atoms of the body its assumption occurs in
    bool domain_restriction = false;
    // enumerate choices of a learnable occurring in E+ over the E+ tuples
    bool positive_example_choice_simplification = false;
};

// The learning encoding: (a) rules, (b) assumption rules, (c)/(d) example
// constraints, (e) choice rules and the minimise objective per learnable.
AspProgram encode_learning(const AbaFramework& framework,
                           const std::vector<Atom>& positives,
                           const std::vector<Atom>& negatives,
                           const std::map<std::string, int>& learnables,
                           const EncodingOptions& opts = {});

// (a)+(b)+(c)+(d): satisfiable iff the framework bravely entails the examples.
AspProgram encode_entailment(const AbaFramework& framework,
                             const std::vector<Atom>& positives,
                             const std::vector<Atom>& negatives);

// (a)+(b) only: answer sets are in one-to-one correspondence with the stable
// extensions of the framework.
AspProgram translate_framework(const AbaFramework& framework);

// One normalised fact p(X) :- X=t per primed atom p'(t) with p learnable.
std::vector<NormalizedRule> decode_facts(const AnswerSet& answer,
                                         const std::map<std::string, int>& learnables);

} // namespace aba
