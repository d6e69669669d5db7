#include <algorithm>

#include "sardkit/poly.hpp"

namespace sardkit {

namespace {

// Exact division of ordinary polynomials by repeated leading-term reduction.
// If q | p then LT(q) | LT(p) at every step, so a failed monomial division
// proves non-divisibility.
std::optional<Poly> divide_ordinary(Poly p, const Poly& q) {
    const Exponents& lq = q.leading_exponents();
    const Rational& cq = q.leading_coefficient();
    Poly quotient;
    while (!p.is_zero()) {
        const Exponents& lp = p.leading_exponents();
        Exponents e{};
        for (std::size_t i = 0; i < kNumVars; ++i) {
            e[i] = lp[i] - lq[i];
            if (e[i] < 0) return std::nullopt;
        }
        const Poly t = Poly::monomial(e, p.leading_coefficient() / cq);
        quotient += t;
        p -= t * q;
    }
    return quotient;
}

Poly exact(const Poly& p, const Poly& q) {
    auto r = divide_exact(p, q);
    if (!r) throw std::logic_error("internal: expected exact division");
    return *r;
}

Poly gcd_rec(const Poly& p, const Poly& q);

// gcd of the coefficients of p viewed as a polynomial in x_v.
Poly content_in(const Poly& p, std::size_t v) {
    Poly g;
    for (int k = p.degree_in(v); k >= 0; --k) {
        Poly c = p.coefficient_in(v, k);
        if (c.is_zero()) continue;
        g = g.is_zero() ? c : gcd_rec(g, c);
        if (g.is_constant()) return Poly(1);
    }
    return g;
}

Poly primitive_part_in(const Poly& p, std::size_t v) { return exact(p, content_in(p, v)); }

Poly lead_coeff_in(const Poly& p, std::size_t v) { return p.coefficient_in(v, p.degree_in(v)); }

// Pseudo-remainder of a by b in R[x_v], R = Q[other variables].
Poly pseudo_remainder(const Poly& a, const Poly& b, std::size_t v) {
    const int n = b.degree_in(v);
    const Poly lb = lead_coeff_in(b, v);
    Poly r = a;
    int e = a.degree_in(v) - n + 1;
    while (!r.is_zero() && r.degree_in(v) >= n) {
        const int dr = r.degree_in(v);
        const Poly lr = lead_coeff_in(r, v);
        r = lb * r - (lr * b).shifted(v, dr - n);
        --e;
    }
    return e > 0 ? lb.pow(static_cast<unsigned>(e)) * r : r;
}

// Subresultant PRS for primitive a, b in R[x_v] with deg a >= deg b >= 1.
Poly subresultant_gcd(Poly a, Poly b, std::size_t v) {
    if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
    Poly g(1);
    Poly h(1);
    for (;;) {
        const int delta = a.degree_in(v) - b.degree_in(v);
        Poly r = pseudo_remainder(a, b, v);
        if (r.is_zero()) return primitive_part_in(b, v);
        if (r.degree_in(v) == 0) return Poly(1);
        a = std::move(b);
        b = exact(r, g * h.pow(static_cast<unsigned>(delta)));
        g = lead_coeff_in(a, v);
        if (delta == 0) continue;
        // h <- g^delta / h^(delta - 1)
        h = exact(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    }
}

Poly gcd_rec(const Poly& p, const Poly& q) {
    if (p.is_zero()) return q;
    if (q.is_zero()) return p;
    if (p.is_constant() || q.is_constant()) return Poly(1);

    std::size_t v = kNumVars;
    for (std::size_t i = 0; i < kNumVars; ++i) {
        if (p.involves(i) || q.involves(i)) {
            v = i;
            break;
        }
    }
    if (!p.involves(v)) return gcd_rec(p, content_in(q, v));
    if (!q.involves(v)) return gcd_rec(content_in(p, v), q);

    const Poly cp = content_in(p, v);
    const Poly cq = content_in(q, v);
    const Poly c = gcd_rec(cp, cq);
    const Poly g = subresultant_gcd(exact(p, cp), exact(q, cq), v);
    return c * g;
}

Poly scale_to_primitive(const Poly& p) {
    // Clear denominators, then divide out the integer content.
    mpz_class den = 1;
    mpz_class num = 0;
    for (const auto& [e, c] : p.terms()) den = lcm(den, c.get_den());
    for (const auto& [e, c] : p.terms()) {
        const Rational scaled = c * den;
        num = gcd(num, mpz_class(scaled.get_num()));
    }
    Rational f(den, num);
    f.canonicalize();
    return p * f;
}

}  // namespace

std::optional<Poly> divide_exact(const Poly& p, const Poly& q) {
    if (q.is_zero()) throw std::domain_error("division by the zero polynomial");
    if (p.is_zero()) return Poly();
    const auto lv = p.laurent_var() ? p.laurent_var() : q.laurent_var();
    if (p.laurent_var() && q.laurent_var() && p.laurent_var() != q.laurent_var()) {
        throw std::invalid_argument("incompatible Laurent variables");
    }
    if (!lv) return divide_ordinary(p, q);

    // Laurent ring: x_v is a unit. Clear poles and strip x_v-content of q.
    const std::size_t v = *lv;
    const int a = std::max(0, -p.min_exponent(v));
    const int b = std::max(0, -q.min_exponent(v));
    Poly pp = p.shifted(v, a).set_laurent_var(std::nullopt);
    Poly qq = q.shifted(v, b);
    const int m = qq.min_exponent(v);
    qq = qq.shifted(v, -m).set_laurent_var(std::nullopt);
    auto r = divide_ordinary(pp, qq);
    if (!r) return std::nullopt;
    r->set_laurent_var(v);
    return r->shifted(v, b - a - m);
}

Poly remainder_mod(const Poly& p, const Poly& h) {
    if (h.is_zero()) return p;
    if (p.has_negative_exponents() || h.has_negative_exponents()) {
        throw std::invalid_argument("remainder_mod is defined for ordinary polynomials only");
    }
    const Exponents& lh = h.leading_exponents();
    const Rational& ch = h.leading_coefficient();
    Poly rest = p;
    Poly r;
    while (!rest.is_zero()) {
        const Exponents lp = rest.leading_exponents();
        const Rational cp = rest.leading_coefficient();
        Exponents e{};
        bool divisible = true;
        for (std::size_t i = 0; i < kNumVars; ++i) {
            e[i] = lp[i] - lh[i];
            if (e[i] < 0) divisible = false;
        }
        if (divisible) {
            rest -= Poly::monomial(e, cp / ch) * h;
        } else {
            const Poly t = Poly::monomial(lp, cp);
            r += t;
            rest -= t;
        }
    }
    return r;
}

Poly normalize_primitive(const Poly& p) {
    if (p.is_zero()) return p;
    Poly r = scale_to_primitive(p);
    if (r.leading_coefficient() < 0) r = -r;
    return r;
}

Poly normalize_primitive_trailing(const Poly& p) {
    if (p.is_zero()) return p;
    Poly r = scale_to_primitive(p);
    if (r.trailing_coefficient() < 0) r = -r;
    return r;
}

Poly gcd(const Poly& p, const Poly& q) {
    if (p.has_negative_exponents() || q.has_negative_exponents()) {
        throw std::invalid_argument("gcd is defined for ordinary polynomials only");
    }
    Poly a = p;
    Poly b = q;
    a.set_laurent_var(std::nullopt);
    b.set_laurent_var(std::nullopt);
    return normalize_primitive(gcd_rec(a, b));
}

Poly squarefree_part(const Poly& p) {
    if (p.is_zero()) throw std::domain_error("squarefree part of the zero polynomial");
    if (p.is_constant()) return Poly(1);
    Poly g = p;
    for (std::size_t v = 0; v < kNumVars; ++v) {
        const Poly d = diff(p, v);
        if (!d.is_zero()) g = gcd(g, d);
    }
    return normalize_primitive(exact(p, g));
}

}  // namespace sardkit
