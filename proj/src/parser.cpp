#include "aba/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace aba {

namespace {

struct Token {
    enum class Kind { Ident, Variable, Directive, Punct, End };
    Kind kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_ws();
        int l = line_, c = col_;
        if (pos_ >= text_.size()) return {Token::Kind::End, "", l, c};
        char ch = text_[pos_];
        if (ch == '#') {
            advance();
            std::string word = read_word();
            if (word.empty()) throw ParseError(l, c, "expected directive name after '#'");
            return {Token::Kind::Directive, word, l, c};
        }
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
            std::string word = read_word();
            bool var = std::isupper(static_cast<unsigned char>(word[0]));
            return {var ? Token::Kind::Variable : Token::Kind::Ident, word, l, c};
        }
        if (ch == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
            advance();
            advance();
            return {Token::Kind::Punct, ":-", l, c};
        }
        if (std::string("().,=/").find(ch) != std::string::npos) {
            advance();
            return {Token::Kind::Punct, std::string(1, ch), l, c};
        }
        throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
    }

private:
    void advance() {
        if (pos_ < text_.size()) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char ch = text_[pos_];
            if (ch == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string read_word() {
        std::string out;
        while (pos_ < text_.size()) {
            char ch = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
                out.push_back(ch);
                advance();
            } else {
                break;
            }
        }
        return out;
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct Statement {
    enum class Kind { Rule, Assumption, Contrary, Positive, Negative, Learnable, Constant };
    Kind kind;
    RawRule rule;                  // Rule
    Atom first, second;            // directives
    std::string pred;              // Learnable / Constant
    int arity = 0;
    int line = 1, column = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { shift(); }

    std::vector<Statement> all() {
        std::vector<Statement> out;
        while (tok_.kind != Token::Kind::End) out.push_back(statement());
        return out;
    }

private:
    void shift() { tok_ = lexer_.next(); }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(tok_.line, tok_.column, msg);
    }

    void expect_punct(const std::string& p) {
        if (tok_.kind != Token::Kind::Punct || tok_.text != p)
            fail("expected '" + p + "'");
        shift();
    }

    bool at_punct(const std::string& p) const {
        return tok_.kind == Token::Kind::Punct && tok_.text == p;
    }

    Term term() {
        if (tok_.kind == Token::Kind::Variable) {
            Term t = Term::variable(tok_.text);
            shift();
            return t;
        }
        if (tok_.kind == Token::Kind::Ident) {
            Term t = Term::constant(tok_.text);
            shift();
            return t;
        }
        fail("expected a term");
    }

    Atom atom() {
        if (tok_.kind != Token::Kind::Ident) fail("expected a predicate name");
        Atom a{tok_.text, {}};
        if (is_internal_pred(a.pred))
            fail("predicate names may not start with '__' (reserved)");
        shift();
        if (at_punct("(")) {
            shift();
            a.args.push_back(term());
            while (at_punct(",")) {
                shift();
                a.args.push_back(term());
            }
            expect_punct(")");
        }
        return a;
    }

    Statement statement() {
        Statement st;
        st.line = tok_.line;
        st.column = tok_.column;

        if (tok_.kind == Token::Kind::Directive) {
            std::string name = tok_.text;
            shift();
            if (name == "assumption") {
                st.kind = Statement::Kind::Assumption;
                st.first = atom();
            } else if (name == "contrary") {
                st.kind = Statement::Kind::Contrary;
                st.first = atom();
                expect_punct(",");
                st.second = atom();
            } else if (name == "positive" || name == "negative") {
                st.kind = name == "positive" ? Statement::Kind::Positive : Statement::Kind::Negative;
                st.first = atom();
            } else if (name == "learnable") {
                st.kind = Statement::Kind::Learnable;
                if (tok_.kind != Token::Kind::Ident) fail("expected a predicate name");
                st.pred = tok_.text;
                if (is_internal_pred(st.pred)) fail("predicate names may not start with '__'");
                shift();
                expect_punct("/");
                if (tok_.kind != Token::Kind::Ident ||
                    tok_.text.find_first_not_of("0123456789") != std::string::npos)
                    fail("expected an arity");
                st.arity = std::stoi(tok_.text);
                shift();
            } else if (name == "constant") {
                st.kind = Statement::Kind::Constant;
                if (tok_.kind != Token::Kind::Ident) fail("expected a constant");
                st.pred = tok_.text;
                shift();
            } else {
                fail("unknown directive #" + name);
            }
            expect_punct(".");
            return st;
        }

        // a rule or fact
        st.kind = Statement::Kind::Rule;
        st.rule.head = atom();
        if (at_punct(":-")) {
            shift();
            while (true) {
                // equality or atom
                if (tok_.kind == Token::Kind::Variable) {
                    Term lhs = term();
                    expect_punct("=");
                    st.rule.equalities.push_back({lhs, term()});
                } else {
                    Atom a = atom();
                    if (at_punct("=")) {
                        if (!a.args.empty()) fail("equality left side must be a term");
                        shift();
                        st.rule.equalities.push_back({Term::constant(a.pred), term()});
                    } else {
                        st.rule.body.push_back(std::move(a));
                    }
                }
                if (at_punct(",")) {
                    shift();
                    continue;
                }
                break;
            }
        }
        expect_punct(".");
        return st;
    }

    Lexer lexer_;
    Token tok_;
};

void collect_constants(const Atom& a, std::set<std::string>& out) {
    for (const auto& t : a.args)
        if (t.is_const()) out.insert(t.name);
}

struct BuiltProblem {
    LearningProblem problem;
};

BuiltProblem build(std::string_view text) {
    Parser parser(text);
    std::vector<Statement> stmts = parser.all();
    if (stmts.empty()) throw ParseError(1, 1, "EmptyProblem: the file contains no statements");

    LearningProblem problem;
    AbaFramework& fw = problem.background;

    // declarations first: assumptions, contraries, constants
    std::set<std::string> constants;
    for (const auto& st : stmts) {
        switch (st.kind) {
        case Statement::Kind::Assumption: {
            for (const auto& t : st.first.args)
                if (t.is_const())
                    throw ParseError(st.line, st.column, "assumption schema must use variables");
            if (st.first.pred == kDomPred)
                throw ParseError(st.line, st.column, "dom is reserved");
            if (!fw.assumption_schema(st.first.pred))
                fw.assumptions.push_back(st.first);
            break;
        }
        case Statement::Kind::Constant:
            constants.insert(st.pred);
            break;
        default:
            break;
        }
    }
    for (const auto& st : stmts) {
        if (st.kind != Statement::Kind::Contrary) continue;
        if (!fw.assumption_schema(st.first.pred))
            throw ParseError(st.line, st.column,
                             "#contrary names undeclared assumption " + st.first.pred);
        if (st.first.args.size() != st.second.args.size())
            throw ParseError(st.line, st.column, "contrary arity mismatch");
        auto [it, inserted] = fw.contraries.emplace(st.first.pred, st.second.pred);
        if (!inserted && it->second != st.second.pred)
            throw ParseError(st.line, st.column, "conflicting contrary for " + st.first.pred);
    }

    std::set<std::string> asm_preds;
    for (const auto& a : fw.assumptions) asm_preds.insert(a.pred);

    for (const auto& st : stmts) {
        switch (st.kind) {
        case Statement::Kind::Rule: {
            if (st.rule.head.pred == kDomPred)
                throw ParseError(st.line, st.column, "dom is reserved for the implicit domain facts");
            collect_constants(st.rule.head, constants);
            for (const auto& a : st.rule.body) collect_constants(a, constants);
            for (const auto& e : st.rule.equalities) {
                if (e.lhs.is_const()) constants.insert(e.lhs.name);
                if (e.rhs.is_const()) constants.insert(e.rhs.name);
            }
            break;
        }
        case Statement::Kind::Positive:
        case Statement::Kind::Negative: {
            if (!st.first.ground())
                throw ParseError(st.line, st.column, "examples must be ground");
            if (asm_preds.count(st.first.pred))
                throw ParseError(st.line, st.column,
                                 "examples must not use assumption predicates");
            collect_constants(st.first, constants);
            if (st.kind == Statement::Kind::Positive)
                problem.positives.push_back(st.first);
            else
                problem.negatives.push_back(st.first);
            break;
        }
        case Statement::Kind::Learnable: {
            if (asm_preds.count(st.pred))
                throw ParseError(st.line, st.column,
                                 "learnable predicate " + st.pred +
                                     " is an assumption (T and pred(A) must be disjoint)");
            problem.learnables[st.pred] = st.arity;
            break;
        }
        default:
            break;
        }
    }

    fw.universe.assign(constants.begin(), constants.end());
    std::sort(fw.universe.begin(), fw.universe.end());

    // rules: schema facts p(X). become p(X) :- dom(X).
    for (const auto& st : stmts) {
        if (st.kind != Statement::Kind::Rule) continue;
        RawRule raw = st.rule;
        if (raw.body.empty() && raw.equalities.empty() && !raw.head.ground()) {
            std::set<std::string> seen;
            for (const auto& t : raw.head.args)
                if (t.is_var() && seen.insert(t.name).second)
                    raw.body.push_back(Atom{std::string(kDomPred), {t}});
        }
        NormalizedRule r;
        try {
            r = normalize(raw, asm_preds);
        } catch (const FlatnessViolation& e) {
            throw ParseError(st.line, st.column, e.what());
        }
        if (fw.has_rule(r)) continue;
        fw.rules.push_back(std::move(r));
    }
    sort_canonically(fw.rules);

    // non-empty assumption set: add a bogus assumption when none is declared
    if (fw.assumptions.empty()) {
        std::string name = "bogus_asm";
        while (fw.predicates().count(name) || problem.learnables.count(name)) name += "_";
        fw.assumptions.push_back(Atom{name, {}});
        fw.contraries[name] = "c_" + name;
    }

    // duplicate example detection and the remaining Definition-side checks
    auto violations = validate_problem(problem);
    if (!violations.empty()) {
        const auto& v = violations.front();
        throw ParseError(1, 1, to_string(v.kind) + ": " + v.detail);
    }
    return {std::move(problem)};
}

// facts whose body is exactly dom(v) per head variable print as schema facts
bool prints_as_schema_fact(const NormalizedRule& r) {
    if (!r.equalities.empty() || r.body.empty()) return false;
    std::set<std::string> head_vars = vars_of(r.head);
    std::set<std::string> dommed;
    for (const auto& a : r.body) {
        if (a.pred != kDomPred || a.args.size() != 1 || !a.args[0].is_var()) return false;
        dommed.insert(a.args[0].name);
    }
    return dommed == head_vars && !head_vars.empty();
}

// ground facts print as p(t).
std::optional<Atom> as_ground_fact(const NormalizedRule& r) {
    if (!r.body.empty()) return std::nullopt;
    EqConstraint eq(r.equalities);
    Atom out{r.head.pred, {}};
    for (const auto& t : r.head.args) {
        if (t.is_const()) {
            out.args.push_back(t);
            continue;
        }
        auto c = eq.constant_of(t.name);
        if (!c) return std::nullopt;
        out.args.push_back(Term::constant(*c));
    }
    // every equality must be explained by the head bindings
    EqConstraint head_only;
    for (size_t i = 0; i < r.head.args.size(); ++i)
        if (r.head.args[i].is_var()) head_only.merge(r.head.args[i], out.args[i]);
    for (const auto& e : r.equalities)
        if (!head_only.entails(e)) return std::nullopt;
    return out;
}

std::string print_rule(const NormalizedRule& r) {
    if (prints_as_schema_fact(r)) return to_string(r.head) + ".";
    if (auto fact = as_ground_fact(r)) return to_string(*fact) + ".";
    std::ostringstream os;
    os << to_string(r.head);
    bool first = true;
    auto sep = [&]() {
        os << (first ? " :- " : ", ");
        first = false;
    };
    for (const auto& e : r.equalities) {
        sep();
        os << e.lhs.name << " = " << e.rhs.name;
    }
    for (const auto& a : r.body) {
        sep();
        os << to_string(a);
    }
    os << '.';
    return os.str();
}

} // namespace

LearningProblem parse_problem(std::string_view text) { return build(text).problem; }

AbaFramework parse_framework(std::string_view text) { return build(text).problem.background; }

std::string print_framework(const AbaFramework& framework) {
    std::ostringstream os;
    std::set<std::string> printed_constants;
    for (const auto& r : framework.rules) {
        os << print_rule(r) << '\n';
        for (const auto& e : r.equalities) {
            if (e.lhs.is_const()) printed_constants.insert(e.lhs.name);
            if (e.rhs.is_const()) printed_constants.insert(e.rhs.name);
        }
    }
    for (const auto& a : framework.assumptions) {
        os << "#assumption " << to_string(a) << ".\n";
        auto it = framework.contraries.find(a.pred);
        if (it != framework.contraries.end())
            os << "#contrary " << to_string(a) << ", " << to_string(Atom{it->second, a.args})
               << ".\n";
    }
    for (const auto& c : framework.universe)
        if (!printed_constants.count(c)) os << "#constant " << c << ".\n";
    return os.str();
}

std::string print_problem(const LearningProblem& problem) {
    std::ostringstream os;
    os << print_framework(problem.background);
    for (const auto& e : problem.positives) os << "#positive " << to_string(e) << ".\n";
    for (const auto& e : problem.negatives) os << "#negative " << to_string(e) << ".\n";
    for (const auto& [p, n] : problem.learnables)
        os << "#learnable " << p << "/" << n << ".\n";
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace aba
