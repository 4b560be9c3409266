#include "aba/aspcore2.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "aba/rule.hpp"

namespace aba {

namespace {

std::string atom_text(const Atom& a) { return to_string(a); }

void emit_body(std::ostringstream& os, const AspRule& r, bool leading_comma) {
    bool first = !leading_comma;
    auto sep = [&]() {
        if (!first) os << ", ";
        first = false;
    };
    // grounder safety: variables must be bound by a positive atom or a
    // constant equality; everything else gets a dom guard
    std::set<std::string> bound;
    for (const auto& a : r.pos_body) {
        auto v = vars_of(a);
        bound.insert(v.begin(), v.end());
    }
    for (const auto& e : r.equalities) {
        if (e.lhs.is_var() && e.rhs.is_const()) bound.insert(e.lhs.name);
        if (e.rhs.is_var() && e.lhs.is_const()) bound.insert(e.rhs.name);
    }
    std::set<std::string> need;
    auto want = [&](const Term& t) {
        if (t.is_var() && !bound.count(t.name)) need.insert(t.name);
    };
    if (r.head)
        for (const auto& t : r.head->args) want(t);
    for (const auto& h : r.choice_heads)
        for (const auto& t : h.args) want(t);
    for (const auto& a : r.naf_body)
        for (const auto& t : a.args) want(t);
    for (const auto& e : r.equalities) {
        want(e.lhs);
        want(e.rhs);
    }

    for (const auto& a : r.pos_body) {
        sep();
        os << atom_text(a);
    }
    for (const auto& v : need) {
        sep();
        os << kDomPred << "(" << v << ")";
    }
    for (const auto& e : r.equalities) {
        sep();
        os << e.lhs.name << " = " << e.rhs.name;
    }
    for (const auto& a : r.naf_body) {
        sep();
        os << "not " << atom_text(a);
    }
}

} // namespace

std::string emit_aspcore2(const AspProgram& program) {
    std::ostringstream os;
    for (const auto& r : program.rules) {
        std::ostringstream body;
        switch (r.kind) {
        case AspRule::Kind::Normal: {
            os << atom_text(*r.head);
            if (!r.pos_body.empty() || !r.naf_body.empty() || !r.equalities.empty()) {
                os << " :- ";
                std::ostringstream b;
                emit_body(b, r, false);
                os << b.str();
            }
            os << ".\n";
            break;
        }
        case AspRule::Kind::Constraint: {
            os << ":- ";
            std::ostringstream b;
            emit_body(b, r, false);
            os << b.str() << ".\n";
            break;
        }
        case AspRule::Kind::Choice: {
            os << "{ ";
            for (size_t i = 0; i < r.choice_heads.size(); ++i) {
                if (i) os << "; ";
                os << atom_text(r.choice_heads[i]);
            }
            os << " }";
            if (!r.pos_body.empty() || !r.naf_body.empty() || !r.equalities.empty()) {
                os << " :- ";
                std::ostringstream b;
                emit_body(b, r, false);
                os << b.str();
            }
            os << ".\n";
            break;
        }
        }
    }
    for (const auto& p : program.minimize_preds) {
        // arity recovered from the choice/head occurrences
        int arity = 0;
        for (const auto& r : program.rules) {
            for (const auto& h : r.choice_heads)
                if (h.pred == p) arity = h.arity();
            if (r.head && r.head->pred == p) arity = r.head->arity();
            for (const auto& a : r.pos_body)
                if (a.pred == p) arity = a.arity();
        }
        os << "#minimize { 1";
        Atom schema{p, {}};
        for (int i = 0; i < arity; ++i) {
            os << ",X" << i + 1;
            schema.args.push_back(Term::variable("X" + std::to_string(i + 1)));
        }
        os << " : " << atom_text(schema) << " }.\n";
    }
    return os.str();
}

namespace {

struct Lx {
    std::string_view text;
    size_t pos = 0;

    void ws() {
        while (pos < text.size()) {
            if (text[pos] == '%') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(text[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
    }
    bool eat(std::string_view s) {
        ws();
        if (text.substr(pos, s.size()) == s) {
            pos += s.size();
            return true;
        }
        return false;
    }
    bool peek(std::string_view s) {
        ws();
        return text.substr(pos, s.size()) == s;
    }
    std::string word() {
        ws();
        std::string out;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            out.push_back(text[pos]);
            ++pos;
        }
        return out;
    }
    bool done() {
        ws();
        return pos >= text.size();
    }
};

Term parse_term(Lx& lx) {
    std::string w = lx.word();
    if (w.empty()) throw std::runtime_error("aspcore2: expected a term near position " +
                                            std::to_string(lx.pos));
    if (std::isupper(static_cast<unsigned char>(w[0]))) return Term::variable(w);
    return Term::constant(w);
}

Atom parse_atom(Lx& lx) {
    std::string name = lx.word();
    if (name.empty()) throw std::runtime_error("aspcore2: expected an atom near position " +
                                               std::to_string(lx.pos));
    Atom a{name, {}};
    if (lx.eat("(")) {
        a.args.push_back(parse_term(lx));
        while (lx.eat(",")) a.args.push_back(parse_term(lx));
        if (!lx.eat(")")) throw std::runtime_error("aspcore2: expected ')'");
    }
    return a;
}

void parse_body(Lx& lx, AspRule& rule) {
    while (true) {
        lx.ws();
        size_t save = lx.pos;
        std::string w = lx.word();
        if (w == "not") {
            rule.naf_body.push_back(parse_atom(lx));
        } else {
            lx.pos = save;
            Atom a = parse_atom(lx);
            if (lx.eat("=")) {
                if (!a.args.empty())
                    throw std::runtime_error("aspcore2: equality over a compound term");
                Term lhs = std::isupper(static_cast<unsigned char>(a.pred[0]))
                               ? Term::variable(a.pred)
                               : Term::constant(a.pred);
                rule.equalities.push_back({lhs, parse_term(lx)});
            } else {
                rule.pos_body.push_back(std::move(a));
            }
        }
        if (!lx.eat(",")) break;
    }
}

} // namespace

AspProgram parse_aspcore2(std::string_view text) {
    AspProgram prog;
    std::set<std::string> constants;
    Lx lx{text};

    while (!lx.done()) {
        if (lx.eat("#minimize")) {
            if (!lx.eat("{")) throw std::runtime_error("aspcore2: expected '{' after #minimize");
            std::string w = lx.word(); // the weight
            while (lx.eat(",")) lx.word();
            if (!lx.eat(":")) throw std::runtime_error("aspcore2: expected ':' in #minimize");
            Atom a = parse_atom(lx);
            prog.minimize_preds.push_back(a.pred);
            if (!lx.eat("}") || !lx.eat("."))
                throw std::runtime_error("aspcore2: malformed #minimize");
            continue;
        }
        AspRule rule;
        if (lx.eat("{")) {
            rule.kind = AspRule::Kind::Choice;
            rule.choice_heads.push_back(parse_atom(lx));
            while (lx.eat(";")) rule.choice_heads.push_back(parse_atom(lx));
            if (!lx.eat("}")) throw std::runtime_error("aspcore2: expected '}'");
            if (lx.eat(":-")) parse_body(lx, rule);
        } else if (lx.eat(":-")) {
            rule.kind = AspRule::Kind::Constraint;
            parse_body(lx, rule);
        } else {
            rule.kind = AspRule::Kind::Normal;
            rule.head = parse_atom(lx);
            if (lx.eat(":-")) parse_body(lx, rule);
        }
        if (!lx.eat(".")) throw std::runtime_error("aspcore2: expected '.'");
        prog.rules.push_back(std::move(rule));
    }

    auto note = [&constants](const Atom& a) {
        for (const auto& t : a.args)
            if (t.is_const()) constants.insert(t.name);
    };
    for (const auto& r : prog.rules) {
        if (r.head) note(*r.head);
        for (const auto& h : r.choice_heads) note(h);
        for (const auto& a : r.pos_body) note(a);
        for (const auto& a : r.naf_body) note(a);
        for (const auto& e : r.equalities) {
            if (e.lhs.is_const()) constants.insert(e.lhs.name);
            if (e.rhs.is_const()) constants.insert(e.rhs.name);
        }
    }
    prog.universe.assign(constants.begin(), constants.end());
    std::sort(prog.universe.begin(), prog.universe.end());
    std::sort(prog.minimize_preds.begin(), prog.minimize_preds.end());
    prog.minimize_preds.erase(std::unique(prog.minimize_preds.begin(), prog.minimize_preds.end()),
                              prog.minimize_preds.end());
    return prog;
}

std::vector<AnswerSet> parse_answer_lines(std::string_view text,
                                          const std::vector<std::string>& minimize_preds) {
    std::set<std::string> min(minimize_preds.begin(), minimize_preds.end());
    std::vector<AnswerSet> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("UNSATISFIABLE") != std::string::npos) return {};
        // skip anything that does not look like an atom list
        std::istringstream ls(line);
        std::string tok;
        AnswerSet as;
        bool any = false, bad = false;
        while (ls >> tok) {
            Lx lx{tok};
            try {
                Atom a = parse_atom(lx);
                if (!lx.done()) throw std::runtime_error("junk");
                as.atoms.push_back(std::move(a));
                any = true;
            } catch (...) {
                bad = true;
                break;
            }
        }
        if (bad || !any) continue;
        std::sort(as.atoms.begin(), as.atoms.end());
        for (const auto& a : as.atoms)
            if (min.count(a.pred)) ++as.cost;
        out.push_back(std::move(as));
    }
    return out;
}

SolveBackend external_backend(const std::string& command) {
    return [command](const AspProgram& program, size_t limit) -> std::vector<AnswerSet> {
        namespace fs = std::filesystem;
        static std::atomic<unsigned> counter{0};
        std::string text = emit_aspcore2(program);
        fs::path tmp = fs::temp_directory_path() /
                       ("abalearn_asp_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter.fetch_add(1)) + ".lp");
        {
            std::ofstream out(tmp);
            out << text;
        }
        std::string cmd = command + " < " + tmp.string();
        FILE* pipe = ::popen(cmd.c_str(), "r");
        if (!pipe) {
            fs::remove(tmp);
            throw std::runtime_error("cannot run external solver: " + command);
        }
        std::string output;
        char buf[4096];
        size_t n;
        while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
        int rc = ::pclose(pipe);
        fs::remove(tmp);
        if (rc == -1) throw std::runtime_error("external solver failed: " + command);
        auto sets = parse_answer_lines(output, program.minimize_preds);
        if (sets.size() > limit) sets.resize(limit);
        return sets;
    };
}

} // namespace aba
