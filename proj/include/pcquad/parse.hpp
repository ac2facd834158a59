#pragma once

// Surface equations in, canonical polynomial text out.
//
// Grammar (whitespace is insignificant):
//
//   equation := expr [ "=" expr ]
//   expr     := term { ("+" | "-") term }
//   term     := unary { ("*" | "/") unary | implicit }
//   implicit := power                   (juxtaposition, e.g. "4y^2", "2(x+1)")
//   unary    := ("+" | "-") unary | power
//   power    := primary [ ("^" | "**") integer ]
//   primary  := number | variable | "(" expr ")"
//   number   := digits [ "." digits ]
//
// Division is allowed only by nonzero constants.  Variables are x, y, z
// (three variables) or x1 .. xn; the two schemes cannot be mixed.

#include <pcquad/errors.hpp>
#include <pcquad/polynomial.hpp>
#include <pcquad/surface.hpp>

#include <cctype>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pcquad {

struct VariableNames {
    std::vector<std::string> names;

    std::size_t size() const noexcept { return names.size(); }
    const std::string& operator[](std::size_t i) const { return names.at(i); }

    std::optional<std::size_t> find(std::string_view name) const
    {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name)
                return i;
        return std::nullopt;
    }

    // x, y, z for three variables, x1 .. xn otherwise.
    static VariableNames surface(std::size_t n)
    {
        if (n == 3)
            return {{"x", "y", "z"}};
        return indexed(n);
    }

    static VariableNames indexed(std::size_t n)
    {
        VariableNames v;
        for (std::size_t i = 1; i <= n; ++i)
            v.names.push_back("x" + std::to_string(i));
        return v;
    }

    // Affine dual plane after eta <- x, xi <- y.
    static VariableNames plane() { return {{"x", "y"}}; }
    static VariableNames homogeneous() { return {{"eta", "xi", "psi"}}; }
    static VariableNames mixed() { return {{"x1", "x2", "x3", "eta", "xi", "psi"}}; }
};

inline std::string format_rational(const Rational& r)
{
    if (denominator(r) == 1)
        return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline std::string format_polynomial(const Polynomial& p, const VariableNames& names)
{
    if (names.size() < p.nvars())
        throw UsageError("name table covers " + std::to_string(names.size()) + " of "
                         + std::to_string(p.nvars()) + " variables");
    if (p.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        const bool negative = c < 0;
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        first = false;

        const Rational magnitude = negative ? Rational(-c) : c;
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (!mono.empty())
                mono += "*";
            mono += names[i];
            if (e[i] > 1)
                mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty())
            out += format_rational(magnitude);
        else if (magnitude == 1)
            out += mono;
        else
            out += format_rational(magnitude) + "*" + mono;
    }
    return out;
}

inline std::string format_polynomial(const Polynomial& p)
{
    return format_polynomial(p, VariableNames::surface(p.nvars()));
}

namespace detail {

struct Token {
    enum class Kind { Number, Ident, Op, End } kind = Kind::End;
    std::string text;
    Rational value;
    std::size_t pos = 0;
};

inline std::vector<Token> tokenize(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char ch = s[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        Token t;
        t.pos = i;
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
            std::size_t j = i;
            Integer whole = 0;
            Integer frac = 0;
            Integer scale = 1;
            bool digits = false;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                whole = whole * 10 + (s[j] - '0');
                ++j;
                digits = true;
            }
            if (j < s.size() && s[j] == '.') {
                ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                    frac = frac * 10 + (s[j] - '0');
                    scale *= 10;
                    ++j;
                    digits = true;
                }
            }
            if (!digits)
                throw ParseError("malformed number", i);
            t.kind = Token::Kind::Number;
            t.value = Rational(whole) + Rational(frac) / Rational(scale);
            t.text = std::string(s.substr(i, j - i));
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < s.size()
                   && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            t.kind = Token::Kind::Ident;
            t.text = std::string(s.substr(i, j - i));
            i = j;
        } else if (ch == '*' && i + 1 < s.size() && s[i + 1] == '*') {
            t.kind = Token::Kind::Op;
            t.text = "^";
            i += 2;
        } else if (std::string_view("+-*/^()=").find(ch) != std::string_view::npos) {
            t.kind = Token::Kind::Op;
            t.text = std::string(1, ch);
            ++i;
        } else {
            throw ParseError(std::string("unexpected character '") + ch + "'", i);
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.pos = s.size();
    out.push_back(end);
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const VariableNames& names)
        : tokens_(std::move(tokens)), names_(names)
    {}

    // Returns lhs - rhs (rhs = 0 when there is no "=").
    Polynomial equation()
    {
        Polynomial lhs = expr();
        if (is_op("=")) {
            advance();
            Polynomial rhs = expr();
            lhs -= rhs;
        }
        expect_end();
        return lhs;
    }

    Polynomial expression()
    {
        Polynomial p = expr();
        expect_end();
        return p;
    }

private:
    static constexpr unsigned max_exponent = 64;

    const Token& peek() const { return tokens_[pos_]; }
    void advance() { ++pos_; }
    bool is_op(std::string_view op) const
    {
        return peek().kind == Token::Kind::Op && peek().text == op;
    }

    void expect_end() const
    {
        if (peek().kind != Token::Kind::End) {
            if (is_op("="))
                throw ParseError("more than one '='", peek().pos);
            throw ParseError("unexpected '" + peek().text + "'", peek().pos);
        }
    }

    Polynomial expr()
    {
        Polynomial acc = term();
        while (is_op("+") || is_op("-")) {
            const bool plus = is_op("+");
            advance();
            Polynomial rhs = term();
            if (plus)
                acc += rhs;
            else
                acc -= rhs;
        }
        return acc;
    }

    Polynomial term()
    {
        Polynomial acc = unary();
        for (;;) {
            if (is_op("*")) {
                advance();
                acc = acc * unary();
            } else if (is_op("/")) {
                const std::size_t at = peek().pos;
                advance();
                Polynomial divisor = unary();
                if (!divisor.is_constant())
                    throw ParseError("nonpolynomial input: division by a non-constant", at);
                if (divisor.is_zero())
                    throw ParseError("division by zero", at);
                acc *= Rational(1) / divisor.constant_term();
            } else if (peek().kind == Token::Kind::Ident || is_op("(")) {
                acc = acc * power();
            } else {
                return acc;
            }
        }
    }

    Polynomial unary()
    {
        if (is_op("-")) {
            advance();
            return -unary();
        }
        if (is_op("+")) {
            advance();
            return unary();
        }
        return power();
    }

    Polynomial power()
    {
        Polynomial base = primary();
        if (!is_op("^"))
            return base;
        advance();
        const Token& t = peek();
        if (is_op("-"))
            throw ParseError("nonpolynomial input: negative exponent", t.pos);
        if (t.kind != Token::Kind::Number || denominator(t.value) != 1)
            throw ParseError("exponent must be a non-negative integer literal", t.pos);
        if (t.value > max_exponent)
            throw ParseError("exponent too large", t.pos);
        const auto k = static_cast<unsigned>(numerator(t.value));
        advance();
        return pow(base, k);
    }

    Polynomial primary()
    {
        const Token t = peek();
        switch (t.kind) {
        case Token::Kind::Number:
            advance();
            return Polynomial::constant(names_.size(), t.value);
        case Token::Kind::Ident: {
            auto idx = names_.find(t.text);
            if (!idx)
                throw ParseError("unknown variable '" + t.text + "'", t.pos);
            advance();
            return Polynomial::variable(names_.size(), *idx);
        }
        case Token::Kind::Op:
            if (t.text == "(") {
                advance();
                Polynomial inner = expr();
                if (!is_op(")"))
                    throw ParseError("expected ')'", peek().pos);
                advance();
                return inner;
            }
            throw ParseError("unexpected '" + t.text + "'", t.pos);
        case Token::Kind::End:
            break;
        }
        throw ParseError("unexpected end of input", t.pos);
    }

    std::vector<Token> tokens_;
    const VariableNames& names_;
    std::size_t pos_ = 0;
};

// Decide between the x,y,z and x1..xn schemes and the variable count.
inline VariableNames surface_names_for(const std::vector<Token>& tokens, std::size_t min_vars)
{
    bool letters = false;
    bool indexed = false;
    std::size_t max_index = 0;
    std::size_t letter_pos = 0;
    std::size_t indexed_pos = 0;
    for (const auto& t : tokens) {
        if (t.kind != Token::Kind::Ident)
            continue;
        if (t.text == "x" || t.text == "y" || t.text == "z") {
            if (!letters)
                letter_pos = t.pos;
            letters = true;
            continue;
        }
        const bool digits_follow = t.text.size() > 1 && t.text[0] == 'x' && t.text[1] != '0'
                                   && std::all_of(t.text.begin() + 1, t.text.end(), [](char c) {
                                          return std::isdigit(static_cast<unsigned char>(c));
                                      });
        if (!digits_follow)
            throw ParseError("unknown variable '" + t.text + "'", t.pos);
        if (t.text.size() > 6)
            throw ParseError("variable index too large in '" + t.text + "'", t.pos);
        if (!indexed)
            indexed_pos = t.pos;
        indexed = true;
        max_index = std::max<std::size_t>(max_index, std::stoul(t.text.substr(1)));
    }
    if (letters && indexed)
        throw ParseError("mixed variable naming schemes (x,y,z with x1..xn)",
                         std::max(letter_pos, indexed_pos));
    if (letters) {
        if (min_vars > 3)
            throw ParseError("x, y, z naming only applies to three variables", letter_pos);
        return VariableNames::surface(3);
    }
    return VariableNames::indexed(std::max({max_index, min_vars, std::size_t{3}}));
}

} // namespace detail

// Parses an expression (no "=") over a fixed name table, without any
// normalization.  format_polynomial output parses back to the same value.
inline Polynomial parse_polynomial(std::string_view text, const VariableNames& names)
{
    detail::Parser parser(detail::tokenize(text), names);
    return parser.expression();
}

// Parses "lhs = rhs" (or a bare expression, meaning "= 0") into F = lhs - rhs
// with denominators cleared and the result normalized.  min_vars raises the
// variable count for x1..xn input whose highest-index variable is absent.
inline QuadricSurface parse_surface(std::string_view text, std::size_t min_vars = 0)
{
    auto tokens = detail::tokenize(text);
    const VariableNames names = detail::surface_names_for(tokens, min_vars);
    detail::Parser parser(std::move(tokens), names);
    Polynomial F = normalize(parser.equation());
    return QuadricSurface(std::move(F));
}

inline std::vector<Rational> parse_rational_list(std::string_view text)
{
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos)
            end = text.size();
        const std::string_view item = text.substr(start, end - start);
        Polynomial v = parse_polynomial(item, VariableNames{});
        if (v.nvars() != 0 || !v.is_constant())
            throw ParseError("expected a rational number", start);
        out.push_back(v.constant_term());
        start = end + 1;
    }
    return out;
}

// "0,1,2" or "0,1/2,3".
inline AxisSpacing parse_spacing(std::string_view text)
{
    return AxisSpacing(parse_rational_list(text));
}

inline std::string format_spacing(const AxisSpacing& spacing)
{
    std::string out;
    for (std::size_t i = 0; i < spacing.size(); ++i) {
        if (i)
            out += ",";
        out += format_rational(spacing[i]);
    }
    return out;
}

} // namespace pcquad
