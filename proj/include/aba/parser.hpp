#pragma once

#include <string>
#include <string_view>

#include "aba/framework.hpp"

namespace aba {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
          line(l), column(c) {}
};

// Problem-file grammar: '%' line comments; rules `h :- b1, ..., bn.` and
// facts `h.`; equalities `X = a` in bodies; directives `#assumption a(X).`,
// `#contrary a(X), c(X).`, `#positive p(t).`, `#negative p(t).`,
// `#learnable p/1.`, `#constant c.`. Constants are lowercase, variables
// uppercase-initial. The universe is inferred from the constants mentioned.
// A schema fact `p(X).` stands for one fact per universe constant and is
// stored as p(X) :- dom(X). A framework with no declared assumption gets a
// bogus one so the assumption set is non-empty.
LearningProblem parse_problem(std::string_view text);

// Same grammar; example and learnable directives are ignored.
AbaFramework parse_framework(std::string_view text);

// Framework in the input syntax, including #assumption/#contrary/#constant
// declarations; parse_problem(print_framework(f)).background == f.
std::string print_framework(const AbaFramework& framework);

// Framework plus the problem directives.
std::string print_problem(const LearningProblem& problem);

std::string read_file(const std::string& path);

} // namespace aba
