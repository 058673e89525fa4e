#include <cctype>
#include <string>

#include "dyncalc/error.hpp"
#include "dyncalc/expr.hpp"

namespace dyncalc {

namespace {

class Parser {
  public:
    explicit Parser(std::string_view text) : s_(text) {}

    Expr run() {
        skip_ws();
        if (eof()) throw SyntaxError(0, "empty expression");
        Expr e = parse_expr();
        skip_ws();
        if (!eof()) throw SyntaxError(i_, "unexpected trailing input");
        return e;
    }

  private:
    std::string_view s_;
    std::size_t i_ = 0;

    bool eof() const { return i_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[i_]; }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool accept(char c) {
        skip_ws();
        if (peek() == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c)) throw SyntaxError(i_, std::string("expected ") + what);
    }

    Expr parse_expr() {
        skip_ws();
        bool negate = false;
        if (peek() == '+' || peek() == '-') {
            negate = peek() == '-';
            ++i_;
        }
        Expr e = parse_term();
        if (negate) e = neg(e);
        for (;;) {
            skip_ws();
            if (peek() == '+') {
                ++i_;
                e = e + parse_term();
            } else if (peek() == '-') {
                ++i_;
                e = e - parse_term();
            } else {
                return e;
            }
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                ++i_;
                e = e * parse_factor();
            } else if (peek() == '/') {
                ++i_;
                e = e / parse_factor();
            } else {
                return e;
            }
        }
    }

    Expr parse_factor() {
        Expr atom = parse_atom();
        skip_ws();
        if (peek() == '^') {
            ++i_;
            return pow(std::move(atom), parse_exponent());
        }
        return atom;
    }

    Expr parse_atom() {
        skip_ws();
        if (eof()) throw SyntaxError(i_, "unexpected end of input");
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return constant(parse_number());
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            std::string name = parse_name();
            skip_ws();
            if (peek() == '(') {
                ++i_;
                Expr arg = parse_expr();
                expect(')', "')'");
                if (name == "sin") return sin(std::move(arg));
                if (name == "cos") return cos(std::move(arg));
                if (name == "exp") return exp(std::move(arg));
                if (name == "ln") return ln(std::move(arg));
                throw SyntaxError(start, "unknown function '" + name + "'");
            }
            return variable(std::move(name));
        }
        if (c == '(') {
            ++i_;
            Expr e = parse_expr();
            expect(')', "')'");
            return e;
        }
        throw SyntaxError(i_, std::string("unexpected character '") + c + "'");
    }

    // exponent := ['-'] digits | '(' ['-'] digits ['/' digits] ')'
    Rational parse_exponent() {
        skip_ws();
        if (accept('(')) {
            bool negv = accept('-');
            BigInt num = parse_digits();
            BigInt den = 1;
            skip_ws();
            if (peek() == '/') {
                ++i_;
                den = parse_digits();
                if (den == 0) throw SyntaxError(i_, "zero denominator in exponent");
            }
            expect(')', "')'");
            Rational r(num, den);
            return negv ? -r : r;
        }
        bool negv = false;
        if (peek() == '-') {
            negv = true;
            ++i_;
        }
        Rational r(parse_digits());
        return negv ? -r : r;
    }

    BigInt parse_digits() {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw SyntaxError(i_, "expected digits");
        BigInt v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            v = v * 10 + (s_[i_] - '0');
            ++i_;
        }
        return v;
    }

    // number := digits ['.' digits]; decimals convert exactly to rationals.
    Rational parse_number() {
        BigInt whole = parse_digits();
        if (peek() != '.') return Rational(whole);
        ++i_;
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw SyntaxError(i_, "expected digits after decimal point");
        BigInt frac = 0;
        BigInt den = 1;
        while (!eof() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            frac = frac * 10 + (s_[i_] - '0');
            den *= 10;
            ++i_;
        }
        return Rational(whole) + Rational(frac, den);
    }

    std::string parse_name() {
        std::string name;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
            name.push_back(s_[i_]);
            ++i_;
        }
        return name;
    }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace dyncalc
