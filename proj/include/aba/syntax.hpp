#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aba {

// Terms are constants (lowercase-initial identifiers) or variables
// (uppercase-initial identifiers).
struct Term {
    enum class Kind : uint8_t { Constant, Variable };

    Kind kind = Kind::Constant;
    std::string name;

    static Term constant(std::string n) { return {Kind::Constant, std::move(n)}; }
    static Term variable(std::string n) { return {Kind::Variable, std::move(n)}; }

    bool is_var() const { return kind == Kind::Variable; }
    bool is_const() const { return kind == Kind::Constant; }

    friend auto operator<=>(const Term&, const Term&) = default;
};

// Predicate symbol applied to a tuple of terms; the arity is args.size().
struct Atom {
    std::string pred;
    std::vector<Term> args;

    int arity() const { return static_cast<int>(args.size()); }
    bool ground() const;

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Equality {
    Term lhs;
    Term rhs;

    friend auto operator<=>(const Equality&, const Equality&) = default;
};

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Equality& e);

bool is_constant_name(std::string_view s);
bool is_variable_name(std::string_view s);

// Internal predicate namespace; rejected in user input.
inline constexpr std::string_view kInternalPrefix = "__";
inline constexpr std::string_view kPrimedPrefix = "__new_";
inline constexpr std::string_view kComplementPrefix = "__not_";
inline constexpr std::string_view kDomPred = "dom";

inline bool is_internal_pred(std::string_view p) { return p.starts_with(kInternalPrefix); }
inline std::string primed(std::string_view p) { return std::string(kPrimedPrefix) + std::string(p); }
inline bool is_primed(std::string_view p) { return p.starts_with(kPrimedPrefix); }
inline std::string unprimed(std::string_view p) { return std::string(p.substr(kPrimedPrefix.size())); }

struct FlatnessViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EncodingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RangeRestrictionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NameCollision : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AssumptionBoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace aba
