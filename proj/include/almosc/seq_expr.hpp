#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "almosc/numeric.hpp"

namespace almosc {

// Immutable AST for a coefficient sequence in the index variable n.
//
// Grammar (documented in the README):
//   expr    := term  (('+' | '-') term)*            left-assoc
//   term    := unary (('*' | '/') unary)*           left-assoc
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?
//   primary := INT | 'n' | '(' expr ')'
//   exponent:= ['-'] INT ['/' INT] | '(' ['-'] INT ['/' INT] ')'
//
// Exponents must be literal rationals reducing to an integer or to a ratio
// of odd positive integers; the single exception is the alternating-sign
// primitive, written exactly "(-1)^n". A quotient of two integer literals
// folds into one rational literal, so the canonical printer round-trips.
struct SeqExpr {
    enum class Kind { Literal, Index, AltSign, Neg, Add, Sub, Mul, Div, Pow };

    Kind kind;
    Rational literal;  // Literal: the (nonnegative) value
    Rational exponent; // Pow: validated literal exponent
    std::shared_ptr<const SeqExpr> lhs, rhs;

    friend bool operator==(const SeqExpr& a, const SeqExpr& b);
};

using SeqExprPtr = std::shared_ptr<const SeqExpr>;

// Syntax error with the byte offset of the offending token.
class SeqParseError : public InputError {
public:
    SeqParseError(const std::string& msg, size_t offset);
    size_t offset() const { return offset_; }

private:
    size_t offset_;
};

SeqExprPtr parse_seq(std::string_view text);

// Canonical form; parse_seq(print_seq(e)) is structurally equal to e.
std::string print_seq(const SeqExpr& expr);
inline std::string print_seq(const SeqExprPtr& expr) { return print_seq(*expr); }

Value eval_seq(const SeqExpr& expr, long n, Mode mode);
inline Value eval_seq(const SeqExprPtr& expr, long n, Mode mode) { return eval_seq(*expr, n, mode); }

// Node constructors (used by tests and by programmatic spec construction).
SeqExprPtr seq_literal(const Rational& v);
SeqExprPtr seq_index();
SeqExprPtr seq_alt_sign();
SeqExprPtr seq_neg(SeqExprPtr a);
SeqExprPtr seq_binary(SeqExpr::Kind op, SeqExprPtr a, SeqExprPtr b);
SeqExprPtr seq_pow(SeqExprPtr base, const Rational& exponent);

// Scans n in [lo, hi]; all_positive reports whether every value is > 0,
// otherwise first_violation is the smallest offending index.
struct PositivityScan {
    bool all_positive = true;
    long first_violation = 0;
};
PositivityScan scan_positive(const SeqExpr& expr, long lo, long hi);
inline PositivityScan scan_positive(const SeqExprPtr& e, long lo, long hi) {
    return scan_positive(*e, lo, hi);
}

} // namespace almosc
