#include "almosc/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace almosc {

namespace {

// Hard cap on integer exponents; keeps a stray "n^999999999" from eating
// all memory in exact mode.
constexpr long kMaxExponent = 1 << 20;

double checked_pow(double base, double e) {
    return checked_finite(std::pow(base, e), "power");
}

mpz_class mpz_pow(const mpz_class& b, unsigned long e) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
    return out;
}

// Exact k-th root (k odd, so negative operands are fine); nullopt if inexact.
std::optional<mpz_class> mpz_exact_root(const mpz_class& x, unsigned long k) {
    mpz_class out;
    if (mpz_root(out.get_mpz_t(), x.get_mpz_t(), k) != 0)
        return out;
    return std::nullopt;
}

} // namespace

double checked_finite(double d, const char* what) {
    if (!std::isfinite(d))
        throw EvalError(std::string("floating-point overflow in ") + what);
    return d;
}

Mode mode_from_string(std::string_view s) {
    if (s == "exact")
        return Mode::Exact;
    if (s == "float")
        return Mode::Float;
    throw InputError("unknown mode \"" + std::string(s) + "\" (expected \"exact\" or \"float\")");
}

std::string to_string(Mode m) {
    return m == Mode::Exact ? "exact" : "float";
}

Rational rational_from_string(std::string_view text) {
    std::string s(text);
    // strip surrounding whitespace
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    if (a == std::string::npos)
        throw InputError("empty rational literal");
    s = s.substr(a, b - a + 1);

    const auto dot = s.find('.');
    if (dot != std::string::npos) {
        // decimal: intpart.fracpart -> (intpart*10^f + fracpart) / 10^f
        bool neg = false;
        std::string digits = s;
        if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
            neg = digits[0] == '-';
            digits.erase(0, 1);
        }
        const auto d2 = digits.find('.');
        std::string ip = digits.substr(0, d2), fp = digits.substr(d2 + 1);
        if (ip.empty() && fp.empty())
            throw InputError("bad decimal literal \"" + std::string(text) + "\"");
        for (char c : ip + fp)
            if (!isdigit(static_cast<unsigned char>(c)))
                throw InputError("bad decimal literal \"" + std::string(text) + "\"");
        mpz_class num(ip.empty() ? "0" : ip);
        for (size_t i = 0; i < fp.size(); ++i)
            num *= 10;
        num += mpz_class(fp.empty() ? "0" : fp);
        mpz_class den = mpz_pow(mpz_class(10), fp.size());
        Rational q(num, den);
        q.canonicalize();
        return neg ? Rational(-q) : q;
    }

    Rational q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw InputError("bad rational literal \"" + std::string(text) + "\"");
    if (q.get_den() == 0)
        throw InputError("zero denominator in \"" + std::string(text) + "\"");
    q.canonicalize();
    return q;
}

std::string rational_to_string(const Rational& q) {
    return q.get_str();
}

OddRatio::OddRatio(long num, long den) {
    if (num <= 0 || den <= 0)
        throw InputError("odd-ratio exponent must be positive");
    const long g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
    if (num_ % 2 == 0 || den_ % 2 == 0)
        throw InputError("exponent " + std::to_string(num) + "/" + std::to_string(den) +
                         " is not a ratio of odd integers");
}

OddRatio OddRatio::parse(std::string_view text) {
    const Rational q = rational_from_string(text);
    if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p())
        throw InputError("odd-ratio exponent out of range: " + std::string(text));
    return OddRatio(q.get_num().get_si(), q.get_den().get_si());
}

std::string OddRatio::to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

void Value::canonical() {
    if (auto* q = std::get_if<Rational>(&v_))
        q->canonicalize();
}

const Rational& Value::rat() const {
    if (const auto* q = std::get_if<Rational>(&v_))
        return *q;
    throw EvalError("expected an exact value");
}

double Value::to_double() const {
    if (const auto* q = std::get_if<Rational>(&v_))
        return q->get_d();
    return std::get<double>(v_);
}

int Value::sign() const {
    if (const auto* q = std::get_if<Rational>(&v_))
        return sgn(*q);
    const double d = std::get<double>(v_);
    return d > 0 ? 1 : d < 0 ? -1 : 0;
}

Value Value::abs() const {
    return sign() < 0 ? -*this : *this;
}

std::string Value::to_string() const {
    if (const auto* q = std::get_if<Rational>(&v_))
        return q->get_str();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v_));
    return buf;
}

Value operator-(const Value& a) {
    if (a.is_exact())
        return Value(Rational(-a.rat()));
    return Value(-a.to_double());
}

Value operator+(const Value& a, const Value& b) {
    if (a.is_exact() && b.is_exact())
        return Value(Rational(a.rat() + b.rat()));
    return Value(checked_finite(a.to_double() + b.to_double(), "addition"));
}

Value operator-(const Value& a, const Value& b) {
    if (a.is_exact() && b.is_exact())
        return Value(Rational(a.rat() - b.rat()));
    return Value(checked_finite(a.to_double() - b.to_double(), "subtraction"));
}

Value operator*(const Value& a, const Value& b) {
    if (a.is_exact() && b.is_exact())
        return Value(Rational(a.rat() * b.rat()));
    return Value(checked_finite(a.to_double() * b.to_double(), "multiplication"));
}

Value operator/(const Value& a, const Value& b) {
    if (b.sign() == 0)
        throw EvalError("division by zero");
    if (a.is_exact() && b.is_exact())
        return Value(Rational(a.rat() / b.rat()));
    return Value(checked_finite(a.to_double() / b.to_double(), "division"));
}

int compare(const Value& a, const Value& b) {
    if (a.is_exact() && b.is_exact())
        return cmp(a.rat(), b.rat());
    const double x = a.to_double(), y = b.to_double();
    return x < y ? -1 : x > y ? 1 : 0;
}

Value int_pow(const Value& x, long e) {
    if (e == 0)
        return Value(1L);
    if (std::labs(e) > kMaxExponent)
        throw EvalError("exponent " + std::to_string(e) + " too large");
    if (x.is_exact()) {
        const bool invert = e < 0;
        const unsigned long ue = static_cast<unsigned long>(invert ? -e : e);
        const Rational& q = x.rat();
        if (invert && sgn(q) == 0)
            throw EvalError("zero base with negative exponent");
        Rational out(mpz_pow(q.get_num(), ue), mpz_pow(q.get_den(), ue));
        out.canonicalize();
        if (invert)
            out = 1 / out;
        return Value(out);
    }
    return Value(checked_pow(x.to_double(), static_cast<double>(e)));
}

std::optional<Rational> try_exact_odd_pow(const Rational& x, const OddRatio& rho) {
    // x^(p/q) = (x^p)^(1/q); num and den are coprime, so the root is exact
    // iff each is a perfect q-th power. q odd keeps the sign of the numerator.
    const mpz_class num = mpz_pow(x.get_num(), static_cast<unsigned long>(rho.num()));
    const mpz_class den = mpz_pow(x.get_den(), static_cast<unsigned long>(rho.num()));
    if (rho.den() == 1) {
        Rational out(num, den);
        out.canonicalize();
        return out;
    }
    const auto rn = mpz_exact_root(num, static_cast<unsigned long>(rho.den()));
    if (!rn)
        return std::nullopt;
    const auto rd = mpz_exact_root(den, static_cast<unsigned long>(rho.den()));
    if (!rd)
        return std::nullopt;
    Rational out(*rn, *rd);
    out.canonicalize();
    return out;
}

std::optional<Rational> try_exact_odd_root(const Rational& u, const OddRatio& rho) {
    return try_exact_odd_pow(u, rho.reciprocal());
}

Value odd_ratio_pow(const Value& x, const OddRatio& rho) {
    if (x.is_exact()) {
        if (auto q = try_exact_odd_pow(x.rat(), rho))
            return Value(std::move(*q));
    }
    const double d = x.to_double();
    const double mag = checked_pow(std::fabs(d), rho.value());
    return Value(d < 0 ? -mag : mag);
}

Value odd_ratio_root(const Value& u, const OddRatio& rho) {
    return odd_ratio_pow(u, rho.reciprocal());
}

Value pos_pow(const Value& x, const Rational& e) {
    const int sx = x.sign();
    if (sx < 0)
        throw InputError("pos_pow requires a nonnegative base");
    if (e.get_den() == 1) {
        if (!e.get_num().fits_slong_p())
            throw EvalError("exponent too large");
        return int_pow(x, e.get_num().get_si());
    }
    if (sx == 0) {
        if (sgn(e) <= 0)
            throw EvalError("zero base with nonpositive exponent");
        return x.is_exact() ? Value(Rational(0)) : Value(0.0);
    }
    if (x.is_exact() && e.get_num().fits_slong_p() && e.get_den().fits_slong_p()) {
        const long en = e.get_num().get_si(), ed = e.get_den().get_si();
        if (std::labs(en) <= kMaxExponent) {
            // try x^(|en|/ed) as an exact root, inverting for negative exponents
            const mpz_class num = mpz_pow(x.rat().get_num(), static_cast<unsigned long>(std::labs(en)));
            const mpz_class den = mpz_pow(x.rat().get_den(), static_cast<unsigned long>(std::labs(en)));
            const auto rn = mpz_exact_root(num, static_cast<unsigned long>(ed));
            const auto rd = rn ? mpz_exact_root(den, static_cast<unsigned long>(ed)) : std::nullopt;
            if (rn && rd) {
                Rational out(*rn, *rd);
                out.canonicalize();
                if (en < 0)
                    out = 1 / out;
                return Value(out);
            }
        }
    }
    return Value(checked_pow(x.to_double(), e.get_d()));
}

} // namespace almosc
