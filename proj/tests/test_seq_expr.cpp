#include <doctest.h>

#include "almosc/errors.hpp"
#include "almosc/seq_expr.hpp"

using namespace almosc;

namespace {

Rational eval_exact(const char* text, long n) {
    return eval_seq(parse_seq(text), n, Mode::Exact).rat();
}

} // namespace

TEST_CASE("literals, the index and alternating signs evaluate") {
    CHECK(eval_exact("4", 9) == Rational(4));
    CHECK(eval_exact("1/2", 3) == Rational(1, 2));
    CHECK(eval_exact("n", 12) == Rational(12));
    CHECK(eval_exact("(-1)^n", 4) == Rational(1));
    CHECK(eval_exact("(-1)^n", 5) == Rational(-1));
}

TEST_CASE("precedence: power, unary minus, product, sum") {
    CHECK(eval_exact("2 + 3 * 4", 1) == Rational(14));
    CHECK(eval_exact("(2 + 3) * 4", 1) == Rational(20));
    CHECK(eval_exact("2 - (-1)^n / n", 2) == Rational(3, 2));
    CHECK(eval_exact("-n^2", 3) == Rational(-9));    // -(n^2)
    CHECK(eval_exact("2 * n^3", 2) == Rational(16)); // 2*(n^3)
    CHECK(eval_exact("6 / 3 / 2", 1) == Rational(1));
    CHECK(eval_exact("1 - 2 - 3", 1) == Rational(-4));
}

TEST_CASE("bundled-example coefficient expressions") {
    CHECK(eval_exact("1 / (n * (n + 1))", 1) == Rational(1, 2));
    CHECK(eval_exact("14 - 11 * (-1)^n", 1) == Rational(25));
    CHECK(eval_exact("14 - 11 * (-1)^n", 2) == Rational(3));
    CHECK(eval_exact("n * (n + 2)^2", 2) == Rational(32));
    CHECK(eval_exact("(3 + n^2 * (n + 1) * (n + 3)) / (n * (n + 1) * (n + 2) * (n + 3))", 1) ==
          Rational(11, 24));
}

TEST_CASE("fractional exponents must be odd ratios") {
    CHECK(eval_exact("n^(5/3)", 8) == Rational(32));
    CHECK_THROWS_AS(parse_seq("n^(1/2)"), SeqParseError);
    CHECK_THROWS_AS(parse_seq("n^(4/6)"), SeqParseError); // reduces to 2/3
    CHECK(eval_exact("n^(-1)", 4) == Rational(1, 4));
    CHECK(eval_exact("n^0", 9) == Rational(1));
}

TEST_CASE("negative bases go through the odd real root") {
    CHECK(eval_exact("(-1)^3", 1) == Rational(-1)); // literal power, not the primitive
    CHECK(eval_exact("(0 - n)^(1/3)", 8) == Rational(-2));
}

TEST_CASE("parse errors carry a byte offset") {
    try {
        parse_seq("2 + * n");
        FAIL("expected a parse error");
    } catch (const SeqParseError& e) {
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(parse_seq(""), SeqParseError);
    CHECK_THROWS_AS(parse_seq("2 +"), SeqParseError);
    CHECK_THROWS_AS(parse_seq("(2"), SeqParseError);
    CHECK_THROWS_AS(parse_seq("2 2"), SeqParseError);
    CHECK_THROWS_AS(parse_seq("n^n"), SeqParseError);     // exponents are literals
    CHECK_THROWS_AS(parse_seq("2^3^4"), SeqParseError);   // chained powers rejected
    CHECK_THROWS_AS(parse_seq("m + 1"), SeqParseError);   // unknown name
}

TEST_CASE("division by zero reports the index") {
    const SeqExprPtr expr = parse_seq("1 / (n - 3)");
    CHECK(eval_seq(expr, 2, Mode::Exact).rat() == Rational(-1));
    CHECK_THROWS_AS(eval_seq(expr, 3, Mode::Exact), EvalError);
    CHECK_THROWS_AS(eval_seq(expr, 3, Mode::Float), EvalError);
}

TEST_CASE("indices start at one") {
    const SeqExprPtr expr = parse_seq("n");
    CHECK_THROWS_AS(eval_seq(expr, 0, Mode::Exact), InputError);
    CHECK_THROWS_AS(eval_seq(expr, -4, Mode::Exact), InputError);
}

TEST_CASE("float mode evaluates through doubles") {
    const SeqExprPtr expr = parse_seq("2 - (-1)^n / n");
    const Value v = eval_seq(expr, 3, Mode::Float);
    CHECK_FALSE(v.is_exact());
    CHECK(v.to_double() == doctest::Approx(2.0 + 1.0 / 3.0));
}

TEST_CASE("print_seq round-trips structurally") {
    for (const char* text : {
             "2 - (-1)^n / n",
             "1 / (n * (n + 1))",
             "14 - 11 * (-1)^n",
             "n * (n + 2)^2",
             "(3 + n^2 * (n + 1) * (n + 3)) / (n * (n + 1) * (n + 2) * (n + 3))",
             "-n^2 + 3",
             "n^(5/3)",
             "1 - 2 - 3",
             "6 / 3 / 2",
             "1/2",
             "-3/2",
         }) {
        const SeqExprPtr once = parse_seq(text);
        const SeqExprPtr twice = parse_seq(print_seq(once));
        CAPTURE(text);
        CAPTURE(print_seq(once));
        CHECK(*once == *twice);
    }
}

TEST_CASE("structural equality distinguishes shapes") {
    CHECK(*parse_seq("n + 1") == *parse_seq("n + 1"));
    CHECK_FALSE(*parse_seq("n + 1") == *parse_seq("1 + n"));
    CHECK_FALSE(*parse_seq("(-1)^n") == *parse_seq("(-1)^3"));
}

TEST_CASE("scan_positive certifies windows and finds violations") {
    const PositivityScan ok = scan_positive(parse_seq("2 - (-1)^n / n"), 1, 500);
    CHECK(ok.all_positive);

    const PositivityScan bad = scan_positive(parse_seq("n - 3"), 1, 10);
    CHECK_FALSE(bad.all_positive);
    CHECK(bad.first_violation == 1); // n - 3 <= 0 already at n = 1

    const PositivityScan later = scan_positive(parse_seq("5 - n"), 1, 10);
    CHECK_FALSE(later.all_positive);
    CHECK(later.first_violation == 5); // first nonpositive value
}

TEST_CASE("constructed expressions print like parsed ones") {
    const SeqExprPtr built = seq_binary(SeqExpr::Kind::Sub, seq_literal(Rational(2)),
                                        seq_binary(SeqExpr::Kind::Div, seq_alt_sign(), seq_index()));
    CHECK(*built == *parse_seq("2 - (-1)^n / n"));
    CHECK(print_seq(built) == print_seq(parse_seq("2 - (-1)^n / n")));
}
