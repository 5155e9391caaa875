#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "almosc/errors.hpp"

namespace almosc {

// Arbitrary-precision rational, canonical form (denominator > 0, lowest terms).
using Rational = mpq_class;

enum class Mode { Exact, Float };

Mode mode_from_string(std::string_view s);
std::string to_string(Mode m);

// Default absolute tolerance for float-mode consistency checks.
inline constexpr double kDefaultTol = 1e-9;

// Parses "p", "p/q" or a plain decimal ("1.5") into an exact rational.
Rational rational_from_string(std::string_view text);
std::string rational_to_string(const Rational& q);

// Exponent p/q with p, q odd positive integers, stored in lowest terms.
// Powers with such exponents extend to all of R while preserving sign,
// which is what makes x^gamma meaningful for sign-changing sequences.
class OddRatio {
public:
    OddRatio() : num_(1), den_(1) {}
    OddRatio(long num, long den);

    static OddRatio parse(std::string_view text); // "p" or "p/q"

    long num() const { return num_; }
    long den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    Rational to_rational() const { return Rational(num_, den_); }
    OddRatio reciprocal() const { return OddRatio(den_, num_); }

    std::string to_string() const;

    friend bool operator==(const OddRatio& a, const OddRatio& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    // num/den ordering by cross multiplication; values are small so no overflow.
    friend bool operator<(const OddRatio& a, const OddRatio& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const OddRatio& a, const OddRatio& b) { return b < a; }
    friend bool operator>=(const OddRatio& a, const OddRatio& b) { return !(a < b); }
    friend bool operator<=(const OddRatio& a, const OddRatio& b) { return !(b < a); }

private:
    long num_, den_;
};

// Dual-mode scalar: an exact rational or a 64-bit float. Arithmetic between
// two exact values stays exact; any operation touching a float yields a float.
// Immutable after construction.
class Value {
public:
    Value() : v_(Rational(0)) {}
    Value(const Rational& q) : v_(q) { canonical(); }
    Value(Rational&& q) : v_(std::move(q)) { canonical(); }
    Value(int n) : v_(Rational(n)) {}
    Value(long n) : v_(Rational(n)) {}
    Value(double d) : v_(d) {}

    bool is_exact() const { return std::holds_alternative<Rational>(v_); }
    const Rational& rat() const; // throws unless exact
    double to_double() const;

    int sign() const;
    Value abs() const;

    // Exact "p/q" for rationals, shortest-ish decimal for floats.
    std::string to_string() const;

    friend Value operator-(const Value& a);
    friend Value operator+(const Value& a, const Value& b);
    friend Value operator-(const Value& a, const Value& b);
    friend Value operator*(const Value& a, const Value& b);
    friend Value operator/(const Value& a, const Value& b); // EvalError on zero divisor

    // Three-way compare; mixed exactness compares through doubles.
    friend int compare(const Value& a, const Value& b);
    friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
    friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }
    friend bool operator>(const Value& a, const Value& b) { return compare(a, b) > 0; }
    friend bool operator<=(const Value& a, const Value& b) { return compare(a, b) <= 0; }
    friend bool operator>=(const Value& a, const Value& b) { return compare(a, b) >= 0; }

private:
    void canonical();
    std::variant<Rational, double> v_;
};

// x^e for integer e; exact for rational x. Negative e inverts (zero base errors).
Value int_pow(const Value& x, long e);

// sign(x) * |x|^(num/den). Total over R. Exact whenever the result is
// representable as a rational (integer exponent, or a perfect root);
// otherwise coerces to float. Overflowing float results raise EvalError.
Value odd_ratio_pow(const Value& x, const OddRatio& rho);

// The unique real t with odd_ratio_pow(t, rho) == u.
Value odd_ratio_root(const Value& u, const OddRatio& rho);

// Exact-only variant: nullopt when sign(x)*|x|^rho has no rational value.
std::optional<Rational> try_exact_odd_pow(const Rational& x, const OddRatio& rho);
std::optional<Rational> try_exact_odd_root(const Rational& u, const OddRatio& rho);

// x^e for arbitrary rational exponent, restricted to x >= 0 (x > 0 when e < 0).
// Exact when the result is rational, float otherwise.
Value pos_pow(const Value& x, const Rational& e);

// Raises EvalError if d is not finite.
double checked_finite(double d, const char* what);

} // namespace almosc
