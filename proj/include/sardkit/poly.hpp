#ifndef SARDKIT_POLY_HPP
#define SARDKIT_POLY_HPP

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace sardkit {

using Rational = mpq_class;

/// Exponent triple (e1, e2, e3) of a monomial x1^e1 x2^e2 x3^e3.
using Exponents = std::array<int, 3>;

inline constexpr std::size_t kNumVars = 3;

/// Graded lexicographic order with x1 > x2 > x3, used descending so that the
/// first entry of a term map is the leading term.
struct GrlexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const {
        const int da = a[0] + a[1] + a[2];
        const int db = b[0] + b[1] + b[2];
        if (da != db) return da > db;
        return a > b;
    }
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Sparse polynomial in x1, x2, x3 with exact rational coefficients.
///
/// Optionally one variable is designated as a Laurent variable and may carry
/// negative exponents (used for blow-up pullbacks, where poles only appear
/// along the exceptional variable). Zero coefficients are never stored, so
/// equal polynomials have identical term maps.
class Poly {
public:
    using TermMap = std::map<Exponents, Rational, GrlexGreater>;

    Poly() = default;
    Poly(long c);  // NOLINT(google-explicit-constructor)
    Poly(const Rational& c);  // NOLINT(google-explicit-constructor)

    static Poly var(std::size_t i);
    static Poly monomial(const Exponents& e, const Rational& c = 1);

    const TermMap& terms() const { return terms_; }
    std::size_t num_terms() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Constant value, or nullopt when the polynomial is not constant.
    std::optional<Rational> constant_value() const;

    int total_degree() const;  // -1 for zero
    int degree_in(std::size_t v) const;
    int min_exponent(std::size_t v) const;  // 0 for zero
    bool involves(std::size_t v) const;

    std::optional<std::size_t> laurent_var() const { return laurent_var_; }
    Poly& set_laurent_var(std::optional<std::size_t> v);
    /// Largest k such that the polynomial has a term with x_v^-k, else 0.
    int pole_order() const;
    bool has_negative_exponents() const;

    const Exponents& leading_exponents() const;
    const Rational& leading_coefficient() const;
    const Rational& trailing_coefficient() const;

    /// Coefficient of x_v^k, as a polynomial in the remaining variables.
    Poly coefficient_in(std::size_t v, int k) const;
    /// Multiplies by x_v^k; negative k requires v to be the Laurent variable.
    Poly shifted(std::size_t v, int k) const;

    Poly pow(unsigned n) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const Rational& c);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
    Poly operator-() const;

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    double eval(const std::array<double, 3>& p) const;
    Rational eval_exact(const std::array<Rational, 3>& p) const;

    std::string to_string() const;

private:
    void add_term(const Exponents& e, const Rational& c);
    void check_exponents(const Exponents& e) const;
    static std::optional<std::size_t> merge_laurent(const Poly& a, const Poly& b);

    TermMap terms_;
    std::optional<std::size_t> laurent_var_;
};

std::ostream& operator<<(std::ostream& os, const Poly& p);

/// Parses the polynomial grammar: variables x, y, z (aliases x1, x2, x3),
/// integer literals, + - * / ^ and parentheses. Division is only allowed by
/// nonzero constants. Negative exponents are accepted only on `laurent_var`.
Poly parse(std::string_view text, std::optional<std::size_t> laurent_var = std::nullopt);

Poly diff(const Poly& p, std::size_t var);

/// Composition p(images[0], images[1], images[2]). Images must be ordinary
/// polynomials and p must not carry negative exponents.
Poly substitute(const Poly& p, const std::array<Poly, 3>& images);

/// Returns r with q * r == p, or nullopt when q does not divide p. In the
/// Laurent setting, divisibility is taken in the Laurent ring.
std::optional<Poly> divide_exact(const Poly& p, const Poly& q);

/// Normal form of p modulo the principal ideal (h): no remaining term is
/// divisible by the leading term of h. Zero iff h divides p.
Poly remainder_mod(const Poly& p, const Poly& h);

/// Greatest common divisor, primitive with positive grlex leading coefficient.
Poly gcd(const Poly& p, const Poly& q);

/// p / gcd(p, dp/dx1, dp/dx2, dp/dx3), normalized like gcd.
Poly squarefree_part(const Poly& p);

/// Scales p to integer coefficients with content 1 and positive leading
/// coefficient (grlex).
Poly normalize_primitive(const Poly& p);

/// Like normalize_primitive but fixes the sign by the trailing (smallest
/// grlex) term instead of the leading one.
Poly normalize_primitive_trailing(const Poly& p);

}  // namespace sardkit

#endif  // SARDKIT_POLY_HPP
