#include <cctype>
#include <string>

#include "sardkit/poly.hpp"

namespace sardkit {

namespace {

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := ('+' | '-') unary | power
// power  := atom ('^' '-'? integer)?
// atom   := integer | variable | '(' expr ')'
class Parser {
public:
    Parser(std::string_view text, std::optional<std::size_t> laurent_var)
        : text_(text), laurent_var_(laurent_var) {}

    Poly run() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
        Poly p = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
        p.set_laurent_var(laurent_var_);
        return p;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly expr() {
        Poly acc = term();
        for (;;) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Poly term() {
        Poly acc = unary();
        for (;;) {
            if (accept('*')) {
                acc *= unary();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                Poly d = unary();
                auto c = d.constant_value();
                if (!c) throw ParseError("division by a non-constant expression", at);
                if (*c == 0) throw ParseError("division by zero", at);
                acc *= Rational(1) / *c;
            } else {
                return acc;
            }
        }
    }

    Poly unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Poly power() {
        skip_ws();
        const std::size_t base_at = pos_;
        Poly base = atom();
        if (!accept('^')) return base;
        skip_ws();
        const std::size_t exp_at = pos_;
        const bool negative = accept('-');
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            throw ParseError("expected integer exponent", pos_);
        }
        const mpz_class n = integer();
        if (n > 1000) throw ParseError("exponent too large", exp_at);
        const auto k = static_cast<unsigned>(n.get_ui());
        if (!negative) return base.pow(k);

        // x_v^-k: only a bare Laurent variable may be inverted.
        if (base.num_terms() == 1 && base.leading_coefficient() == 1) {
            const Exponents& e = base.leading_exponents();
            for (std::size_t v = 0; v < kNumVars; ++v) {
                if (e[v] == 1 && e[0] + e[1] + e[2] == 1) {
                    if (!laurent_var_ || *laurent_var_ != v) {
                        throw ParseError("negative exponent in non-Laurent context", exp_at);
                    }
                    Exponents f{0, 0, 0};
                    f[v] = -static_cast<int>(k);
                    return Poly::monomial(f);
                }
            }
        }
        throw ParseError("negative exponent on a non-variable base", base_at);
    }

    mpz_class integer() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return mpz_class(std::string(text_.substr(start, pos_ - start)), 10);
    }

    Poly atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Poly inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Poly(Rational(integer()));
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view name = text_.substr(start, pos_ - start);
            if (name == "x" || name == "x1") return Poly::var(0);
            if (name == "y" || name == "x2") return Poly::var(1);
            if (name == "z" || name == "x3") return Poly::var(2);
            throw ParseError("unknown variable '" + std::string(name) + "'", start);
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    std::string_view text_;
    std::optional<std::size_t> laurent_var_;
    std::size_t pos_ = 0;
};

}  // namespace

Poly parse(std::string_view text, std::optional<std::size_t> laurent_var) {
    return Parser(text, laurent_var).run();
}

}  // namespace sardkit
