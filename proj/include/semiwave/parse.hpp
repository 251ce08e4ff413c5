#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "semiwave/expr.hpp"

namespace semiwave {

/// Syntax or semantic error in expression text, with the byte offset where
/// it was detected.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset)
    {
    }
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

struct ParseOptions {
    /// F(x, q) with q normalizing to 0 expands to ln(x); when disabled that
    /// case is an error.
    bool allow_ln_branch = true;
    /// Unknown functions: name -> argument atoms. Enables `name` and
    /// `diff(name, x, y, ...)` with x, y among the arguments.
    std::map<std::string, std::vector<Atom>> unknowns;
};

/// Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := integer | ident | call | '(' expr ')'
///   call    := ('F' | 'ln' | 'exp' | 'abs') '(' expr (',' expr)? ')'
/// Identifiers: t r p m a b c s sigma i eps sqrt2 and jet variables such as
/// u, ubar, u_t, u_rr, ubar_trr, v_r, w. Exponents must be free of t, r and
/// jet variables. abs(x) is (x*conj(x))^(1/2).
Expr parse(std::string_view text, const ParseOptions& options = {});

/// Parse and normalize in one step.
NormalForm parse_nf(std::string_view text, const ParseOptions& options = {});

/// Grammar text that parses back to an equivalent expression.
std::string print(const Expr& e);
std::string print(const NormalForm& e);

}  // namespace semiwave
