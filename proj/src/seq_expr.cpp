#include "almosc/seq_expr.hpp"

#include <cctype>
#include <vector>

namespace almosc {

namespace {

struct Token {
    enum class Kind { Int, N, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind;
    size_t offset;
    Rational value; // Int only
};

const char* token_name(Token::Kind k) {
    switch (k) {
    case Token::Kind::Int: return "integer";
    case Token::Kind::N: return "'n'";
    case Token::Kind::Plus: return "'+'";
    case Token::Kind::Minus: return "'-'";
    case Token::Kind::Star: return "'*'";
    case Token::Kind::Slash: return "'/'";
    case Token::Kind::Caret: return "'^'";
    case Token::Kind::LParen: return "'('";
    case Token::Kind::RParen: return "')'";
    case Token::Kind::End: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                ++i;
            out.push_back({Token::Kind::Int, start,
                           Rational(mpz_class(std::string(text.substr(start, i - start))))});
            continue;
        }
        Token::Kind k;
        switch (c) {
        case 'n': k = Token::Kind::N; break;
        case '+': k = Token::Kind::Plus; break;
        case '-': k = Token::Kind::Minus; break;
        case '*': k = Token::Kind::Star; break;
        case '/': k = Token::Kind::Slash; break;
        case '^': k = Token::Kind::Caret; break;
        case '(': k = Token::Kind::LParen; break;
        case ')': k = Token::Kind::RParen; break;
        default:
            throw SeqParseError(std::string("unexpected character '") + c + "'", i);
        }
        out.push_back({k, i, Rational(0)});
        ++i;
    }
    out.push_back({Token::Kind::End, text.size(), Rational(0)});
    return out;
}

SeqExprPtr make(SeqExpr e) {
    return std::make_shared<const SeqExpr>(std::move(e));
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    SeqExprPtr parse() {
        SeqExprPtr e = parse_expr();
        expect(Token::Kind::End);
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }
    bool accept(Token::Kind k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(Token::Kind k) {
        if (!accept(k))
            throw SeqParseError(std::string("expected ") + token_name(k) + ", found " +
                                    token_name(peek().kind),
                                peek().offset);
    }

    SeqExprPtr parse_expr() {
        SeqExprPtr e = parse_term();
        while (true) {
            if (accept(Token::Kind::Plus))
                e = seq_binary(SeqExpr::Kind::Add, e, parse_term());
            else if (accept(Token::Kind::Minus))
                e = seq_binary(SeqExpr::Kind::Sub, e, parse_term());
            else
                return e;
        }
    }

    SeqExprPtr parse_term() {
        SeqExprPtr e = parse_unary();
        while (true) {
            if (accept(Token::Kind::Star)) {
                e = seq_binary(SeqExpr::Kind::Mul, e, parse_unary());
            } else if (accept(Token::Kind::Slash)) {
                const size_t off = peek().offset;
                SeqExprPtr rhs = parse_unary();
                // fold literal/literal so rational literals print round-trip
                if (e->kind == SeqExpr::Kind::Literal && rhs->kind == SeqExpr::Kind::Literal) {
                    if (sgn(rhs->literal) == 0)
                        throw SeqParseError("division by zero in constant", off);
                    e = seq_literal(e->literal / rhs->literal);
                } else {
                    e = seq_binary(SeqExpr::Kind::Div, e, rhs);
                }
            } else {
                return e;
            }
        }
    }

    SeqExprPtr parse_unary() {
        if (accept(Token::Kind::Minus))
            return seq_neg(parse_unary());
        return parse_power();
    }

    SeqExprPtr parse_power() {
        auto [base, paren_neg_one] = parse_primary();
        if (!accept(Token::Kind::Caret))
            return base;
        // the alternating-sign primitive "(-1)^n"
        if (paren_neg_one && peek().kind == Token::Kind::N) {
            next();
            return seq_alt_sign();
        }
        const size_t off = peek().offset;
        const Rational e = parse_exponent();
        if (peek().kind == Token::Kind::Caret)
            throw SeqParseError("chained '^' is not allowed; parenthesize the base",
                                peek().offset);
        return make_pow(base, e, off);
    }

    // [-] INT [/ INT], optionally parenthesized
    Rational parse_exponent() {
        if (accept(Token::Kind::LParen)) {
            const Rational e = parse_exponent_body();
            expect(Token::Kind::RParen);
            return e;
        }
        return parse_exponent_body();
    }

    Rational parse_exponent_body() {
        const bool neg = accept(Token::Kind::Minus);
        if (peek().kind != Token::Kind::Int)
            throw SeqParseError("exponent must be a literal rational (or the primitive (-1)^n)",
                                peek().offset);
        Rational num = next().value;
        if (accept(Token::Kind::Slash)) {
            if (peek().kind != Token::Kind::Int)
                throw SeqParseError("expected integer denominator in exponent", peek().offset);
            const Rational den = next().value;
            if (sgn(den) == 0)
                throw SeqParseError("zero denominator in exponent", peek().offset);
            num /= den;
        }
        return neg ? Rational(-num) : num;
    }

    SeqExprPtr make_pow(SeqExprPtr base, const Rational& e, size_t off) {
        if (e.get_den() != 1) {
            // fractional exponents must carry the sign-preserving semantics
            try {
                (void)OddRatio::parse(e.get_str());
            } catch (const InputError&) {
                throw SeqParseError("exponent " + e.get_str() +
                                        " must reduce to an integer or a ratio of odd positive "
                                        "integers",
                                    off);
            }
        }
        return seq_pow(base, e);
    }

    // second member: base was the parenthesized literal -1 (AltSign candidate)
    std::pair<SeqExprPtr, bool> parse_primary() {
        const Token t = next();
        switch (t.kind) {
        case Token::Kind::Int:
            return {seq_literal(t.value), false};
        case Token::Kind::N:
            return {seq_index(), false};
        case Token::Kind::LParen: {
            SeqExprPtr inner = parse_expr();
            expect(Token::Kind::RParen);
            const bool neg_one = inner->kind == SeqExpr::Kind::Neg &&
                                 inner->lhs->kind == SeqExpr::Kind::Literal &&
                                 inner->lhs->literal == 1;
            return {inner, neg_one};
        }
        default:
            throw SeqParseError(std::string("expected integer, 'n' or '(', found ") +
                                    token_name(t.kind),
                                t.offset);
        }
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
};

int precedence(SeqExpr::Kind k) {
    switch (k) {
    case SeqExpr::Kind::Add:
    case SeqExpr::Kind::Sub: return 1;
    case SeqExpr::Kind::Mul:
    case SeqExpr::Kind::Div: return 2;
    case SeqExpr::Kind::Neg: return 3;
    case SeqExpr::Kind::Pow: return 4;
    default: return 5;
    }
}

void print_rec(const SeqExpr& e, std::string& out) {
    const auto child = [&out](const SeqExpr& c, bool parens) {
        if (parens)
            out += '(';
        print_rec(c, out);
        if (parens)
            out += ')';
    };
    const int p = precedence(e.kind);
    switch (e.kind) {
    case SeqExpr::Kind::Literal:
        out += e.literal.get_str();
        break;
    case SeqExpr::Kind::Index:
        out += 'n';
        break;
    case SeqExpr::Kind::AltSign:
        out += "(-1)^n";
        break;
    case SeqExpr::Kind::Neg:
        out += '-';
        child(*e.lhs, precedence(e.lhs->kind) < p);
        break;
    case SeqExpr::Kind::Add:
    case SeqExpr::Kind::Sub:
    case SeqExpr::Kind::Mul:
    case SeqExpr::Kind::Div: {
        child(*e.lhs, precedence(e.lhs->kind) < p);
        switch (e.kind) {
        case SeqExpr::Kind::Add: out += " + "; break;
        case SeqExpr::Kind::Sub: out += " - "; break;
        case SeqExpr::Kind::Mul: out += "*"; break;
        default: out += "/"; break;
        }
        child(*e.rhs, precedence(e.rhs->kind) <= p);
        break;
    }
    case SeqExpr::Kind::Pow:
        child(*e.lhs, precedence(e.lhs->kind) < p);
        out += '^';
        if (e.exponent.get_den() == 1 && sgn(e.exponent) >= 0)
            out += e.exponent.get_str();
        else
            out += "(" + e.exponent.get_str() + ")";
        break;
    }
}

} // namespace

SeqParseError::SeqParseError(const std::string& msg, size_t offset)
    : InputError(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

bool operator==(const SeqExpr& a, const SeqExpr& b) {
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case SeqExpr::Kind::Literal:
        return a.literal == b.literal;
    case SeqExpr::Kind::Index:
    case SeqExpr::Kind::AltSign:
        return true;
    case SeqExpr::Kind::Neg:
        return *a.lhs == *b.lhs;
    case SeqExpr::Kind::Pow:
        return a.exponent == b.exponent && *a.lhs == *b.lhs;
    default:
        return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
    }
}

SeqExprPtr seq_literal(const Rational& v) {
    SeqExpr e{SeqExpr::Kind::Literal, v, Rational(0), nullptr, nullptr};
    return make(std::move(e));
}

SeqExprPtr seq_index() {
    return make({SeqExpr::Kind::Index, Rational(0), Rational(0), nullptr, nullptr});
}

SeqExprPtr seq_alt_sign() {
    return make({SeqExpr::Kind::AltSign, Rational(0), Rational(0), nullptr, nullptr});
}

SeqExprPtr seq_neg(SeqExprPtr a) {
    return make({SeqExpr::Kind::Neg, Rational(0), Rational(0), std::move(a), nullptr});
}

SeqExprPtr seq_binary(SeqExpr::Kind op, SeqExprPtr a, SeqExprPtr b) {
    return make({op, Rational(0), Rational(0), std::move(a), std::move(b)});
}

SeqExprPtr seq_pow(SeqExprPtr base, const Rational& exponent) {
    return make({SeqExpr::Kind::Pow, Rational(0), exponent, std::move(base), nullptr});
}

SeqExprPtr parse_seq(std::string_view text) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw SeqParseError("empty expression", 0);
    return Parser(text).parse();
}

std::string print_seq(const SeqExpr& expr) {
    std::string out;
    print_rec(expr, out);
    return out;
}

Value eval_seq(const SeqExpr& expr, long n, Mode mode) {
    if (n < 1)
        throw InputError("sequence index must be >= 1, got " + std::to_string(n));
    switch (expr.kind) {
    case SeqExpr::Kind::Literal:
        return mode == Mode::Exact ? Value(expr.literal) : Value(expr.literal.get_d());
    case SeqExpr::Kind::Index:
        return mode == Mode::Exact ? Value(n) : Value(static_cast<double>(n));
    case SeqExpr::Kind::AltSign: {
        const long s = n % 2 == 0 ? 1 : -1;
        return mode == Mode::Exact ? Value(s) : Value(static_cast<double>(s));
    }
    case SeqExpr::Kind::Neg:
        return -eval_seq(*expr.lhs, n, mode);
    case SeqExpr::Kind::Add:
        return eval_seq(*expr.lhs, n, mode) + eval_seq(*expr.rhs, n, mode);
    case SeqExpr::Kind::Sub:
        return eval_seq(*expr.lhs, n, mode) - eval_seq(*expr.rhs, n, mode);
    case SeqExpr::Kind::Mul:
        return eval_seq(*expr.lhs, n, mode) * eval_seq(*expr.rhs, n, mode);
    case SeqExpr::Kind::Div: {
        const Value den = eval_seq(*expr.rhs, n, mode);
        if (den.sign() == 0)
            throw EvalError("division by zero at n = " + std::to_string(n));
        return eval_seq(*expr.lhs, n, mode) / den;
    }
    case SeqExpr::Kind::Pow: {
        const Value base = eval_seq(*expr.lhs, n, mode);
        if (expr.exponent.get_den() == 1)
            return int_pow(base, expr.exponent.get_num().get_si());
        return odd_ratio_pow(base, OddRatio::parse(expr.exponent.get_str()));
    }
    }
    throw Error("unreachable");
}

PositivityScan scan_positive(const SeqExpr& expr, long lo, long hi) {
    for (long n = lo; n <= hi; ++n) {
        if (eval_seq(expr, n, Mode::Exact).sign() <= 0)
            return {false, n};
    }
    return {true, 0};
}

} // namespace almosc
