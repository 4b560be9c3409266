#include "aba/syntax.hpp"

#include <cctype>
#include <sstream>

namespace aba {

bool Atom::ground() const {
    for (const auto& t : args)
        if (t.is_var()) return false;
    return true;
}

std::string to_string(const Term& t) { return t.name; }

std::string to_string(const Atom& a) {
    if (a.args.empty()) return a.pred;
    std::ostringstream os;
    os << a.pred << '(';
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) os << ',';
        os << a.args[i].name;
    }
    os << ')';
    return os.str();
}

std::string to_string(const Equality& e) { return e.lhs.name + "=" + e.rhs.name; }

bool is_constant_name(std::string_view s) {
    if (s.empty()) return false;
    if (!std::islower(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

bool is_variable_name(std::string_view s) {
    if (s.empty()) return false;
    if (!std::isupper(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

} // namespace aba
