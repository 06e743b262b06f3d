#pragma once

// Infix polynomial parser: + - * / ^ parentheses, integer and a/b constants,
// juxtaposition as multiplication ("2x", "x y"). '/' requires a constant
// divisor. Unknown identifiers are reported with position.

#include <cctype>
#include <stdexcept>
#include <string>

#include "polynomial.hpp"

namespace kdr {

struct ParseError : std::runtime_error {
    size_t pos;
    ParseError(const std::string& msg, size_t p)
        : std::runtime_error(msg + " (at column " + std::to_string(p + 1) + ")"), pos(p) {}
};

class PolyParser {
public:
    PolyParser(RingPtr ring, std::string text) : ring_(std::move(ring)), s_(std::move(text)) {}

    Polynomial parse() {
        Polynomial p = parse_expr();
        skip_ws();
        if (i_ != s_.size()) throw ParseError("unexpected trailing input", i_);
        return p;
    }

private:
    RingPtr ring_;
    std::string s_;
    size_t i_ = 0;

    void skip_ws() { while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_; }
    bool peek(char c) { skip_ws(); return i_ < s_.size() && s_[i_] == c; }
    bool eat(char c) { if (peek(c)) { ++i_; return true; } return false; }

    Polynomial parse_expr() {
        Polynomial p = parse_term();
        for (;;) {
            if (eat('+')) p += parse_term();
            else if (eat('-')) p -= parse_term();
            else return p;
        }
    }

    bool starts_factor() {
        skip_ws();
        if (i_ >= s_.size()) return false;
        char c = s_[i_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '_';
    }

    Polynomial parse_term() {
        Polynomial p = parse_factor();
        for (;;) {
            if (eat('*')) { p *= parse_factor(); continue; }
            if (eat('/')) {
                Polynomial d = parse_factor();
                if (!d.is_constant() || d.is_zero())
                    throw ParseError("divisor must be a nonzero constant", i_);
                p = p * d.constant_value().inv();
                continue;
            }
            if (starts_factor()) { p *= parse_factor(); continue; }
            return p;
        }
    }

    Polynomial parse_factor() {
        skip_ws();
        if (eat('-')) return -parse_factor();
        if (eat('+')) return parse_factor();
        Polynomial base = parse_primary();
        if (eat('^')) {
            skip_ws();
            size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (start == i_) throw ParseError("exponent expected", i_);
            base = base.pow(std::stoi(s_.substr(start, i_ - start)));
        }
        return base;
    }

    Polynomial parse_primary() {
        skip_ws();
        if (i_ >= s_.size()) throw ParseError("unexpected end of input", i_);
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            Polynomial p = parse_expr();
            if (!eat(')')) throw ParseError("expected ')'", i_);
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return Polynomial::constant(ring_, Rational(BigInt::from_string(s_.substr(start, i_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i_;
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\''))
                ++i_;
            std::string name = s_.substr(start, i_ - start);
            int idx = ring_->index_of(name);
            if (idx < 0) throw ParseError("undeclared variable '" + name + "'", start);
            return Polynomial::variable(ring_, idx);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", i_);
    }
};

inline Polynomial parse_poly(const RingPtr& ring, const std::string& text) {
    return PolyParser(ring, text).parse();
}

} // namespace kdr
