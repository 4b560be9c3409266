#pragma once

#include <string>
#include <string_view>

#include "aba/asp.hpp"
#include "aba/learner.hpp"

namespace aba {

// Serialises a program in ASP-Core-2 concrete syntax: `.`-terminated rules,
// `not` for negation as failure, `{p(X)} :- dom(X).` choice rules and
// `#minimize { 1,X : p(X) }.` directives. dom guards are added for variables
// an external grounder could not bind.
std::string emit_aspcore2(const AspProgram& program);

// Reads the fragment emit_aspcore2 produces (used by the bundled external
// backend).
AspProgram parse_aspcore2(std::string_view text);

// Answer sets as whitespace-separated ground atoms, one set per line;
// the keyword UNSATISFIABLE means none.
std::vector<AnswerSet> parse_answer_lines(std::string_view text,
                                          const std::vector<std::string>& minimize_preds);

// Subprocess backend: the program is piped to `command` on stdin; optimal
// answer sets are read back one per line.
SolveBackend external_backend(const std::string& command);

} // namespace aba
