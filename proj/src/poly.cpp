#include "sardkit/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sardkit {

namespace {

constexpr std::array<const char*, 3> kVarNames = {"x", "y", "z"};

}  // namespace

Poly::Poly(long c) {
    if (c != 0) terms_.emplace(Exponents{0, 0, 0}, Rational(c));
}

Poly::Poly(const Rational& c) {
    if (c != 0) terms_.emplace(Exponents{0, 0, 0}, c).first->second.canonicalize();
}

Poly Poly::var(std::size_t i) {
    if (i >= kNumVars) throw std::out_of_range("variable index out of range");
    Exponents e{0, 0, 0};
    e[i] = 1;
    return monomial(e);
}

Poly Poly::monomial(const Exponents& e, const Rational& c) {
    Poly p;
    for (std::size_t v = 0; v < kNumVars; ++v) {
        if (e[v] < 0) p.laurent_var_ = v;
    }
    p.check_exponents(e);
    if (c != 0) {
        Rational cc = c;
        cc.canonicalize();
        p.terms_.emplace(e, cc);
    }
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{0, 0, 0});
}

std::optional<Rational> Poly::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) return std::nullopt;
    return terms_.begin()->second;
}

int Poly::total_degree() const {
    if (terms_.empty()) return -1;
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
    return d;
}

int Poly::degree_in(std::size_t v) const {
    int d = terms_.empty() ? -1 : terms_.begin()->first[v];
    for (const auto& [e, c] : terms_) d = std::max(d, e[v]);
    return d;
}

int Poly::min_exponent(std::size_t v) const {
    if (terms_.empty()) return 0;
    int d = terms_.begin()->first[v];
    for (const auto& [e, c] : terms_) d = std::min(d, e[v]);
    return d;
}

bool Poly::involves(std::size_t v) const {
    return std::any_of(terms_.begin(), terms_.end(), [v](const auto& t) { return t.first[v] != 0; });
}

Poly& Poly::set_laurent_var(std::optional<std::size_t> v) {
    if (v && *v >= kNumVars) throw std::out_of_range("laurent variable index out of range");
    for (const auto& [e, c] : terms_) {
        for (std::size_t i = 0; i < kNumVars; ++i) {
            if (e[i] < 0 && (!v || *v != i)) {
                throw std::invalid_argument("negative exponent outside the Laurent variable");
            }
        }
    }
    laurent_var_ = v;
    return *this;
}

int Poly::pole_order() const {
    if (!laurent_var_) return 0;
    return std::max(0, -min_exponent(*laurent_var_));
}

bool Poly::has_negative_exponents() const { return pole_order() > 0; }

const Exponents& Poly::leading_exponents() const {
    if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
    return terms_.begin()->first;
}

const Rational& Poly::leading_coefficient() const {
    if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
    return terms_.begin()->second;
}

const Rational& Poly::trailing_coefficient() const {
    if (terms_.empty()) throw std::domain_error("trailing term of zero polynomial");
    return terms_.rbegin()->second;
}

Poly Poly::coefficient_in(std::size_t v, int k) const {
    Poly r;
    r.laurent_var_ = laurent_var_;
    for (const auto& [e, c] : terms_) {
        if (e[v] != k) continue;
        Exponents f = e;
        f[v] = 0;
        r.terms_.emplace(f, c);
    }
    return r;
}

Poly Poly::shifted(std::size_t v, int k) const {
    Poly r;
    r.laurent_var_ = laurent_var_;
    for (const auto& [e, c] : terms_) {
        Exponents f = e;
        f[v] += k;
        r.check_exponents(f);
        r.terms_.emplace(f, c);
    }
    return r;
}

Poly Poly::pow(unsigned n) const {
    Poly result(1);
    result.laurent_var_ = laurent_var_;
    Poly base = *this;
    while (n > 0) {
        if (n & 1U) result *= base;
        n >>= 1U;
        if (n > 0) base *= base;
    }
    return result;
}

void Poly::check_exponents(const Exponents& e) const {
    for (std::size_t i = 0; i < kNumVars; ++i) {
        if (e[i] < 0 && (!laurent_var_ || *laurent_var_ != i)) {
            throw std::invalid_argument("negative exponent in non-Laurent variable " +
                                        std::string(kVarNames[i]));
        }
    }
}

void Poly::add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (inserted) {
        it->second.canonicalize();
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

std::optional<std::size_t> Poly::merge_laurent(const Poly& a, const Poly& b) {
    if (a.laurent_var_ && b.laurent_var_ && *a.laurent_var_ != *b.laurent_var_) {
        throw std::invalid_argument("incompatible Laurent variables");
    }
    return a.laurent_var_ ? a.laurent_var_ : b.laurent_var_;
}

Poly& Poly::operator+=(const Poly& o) {
    laurent_var_ = merge_laurent(*this, o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    laurent_var_ = merge_laurent(*this, o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    r.laurent_var_ = Poly::merge_laurent(a, b);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
        }
    }
    return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    Rational cc = c;
    cc.canonicalize();
    for (auto& [e, v] : terms_) v *= cc;
    return *this;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& [e, v] : r.terms_) v = -v;
    return r;
}

double Poly::eval(const std::array<double, 3>& p) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c.get_d();
        for (std::size_t i = 0; i < kNumVars; ++i) {
            if (e[i] != 0) term *= std::pow(p[i], e[i]);
        }
        sum += term;
    }
    return sum;
}

Rational Poly::eval_exact(const std::array<Rational, 3>& p) const {
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
        Rational term = c;
        for (std::size_t i = 0; i < kNumVars; ++i) {
            const int n = std::abs(e[i]);
            Rational f = 1;
            for (int k = 0; k < n; ++k) f *= p[i];
            if (e[i] < 0) {
                if (f == 0) throw std::domain_error("pole: Laurent variable is zero");
                term /= f;
            } else {
                term *= f;
            }
        }
        sum += term;
    }
    return sum;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        const bool negative = c < 0;
        const Rational mag = abs(c);
        if (first) {
            if (negative) os << '-';
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;

        std::vector<std::string> factors;
        const bool is_const = e == Exponents{0, 0, 0};
        if (mag != 1 || is_const) factors.push_back(mag.get_str());
        for (std::size_t i = 0; i < kNumVars; ++i) {
            if (e[i] == 0) continue;
            std::string f = kVarNames[i];
            if (e[i] != 1) f += "^" + std::to_string(e[i]);
            factors.push_back(std::move(f));
        }
        for (std::size_t k = 0; k < factors.size(); ++k) {
            if (k > 0) os << '*';
            os << factors[k];
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

Poly diff(const Poly& p, std::size_t var) {
    if (var >= kNumVars) throw std::out_of_range("variable index out of range");
    Poly r;
    r.set_laurent_var(p.laurent_var());
    for (const auto& [e, c] : p.terms()) {
        if (e[var] == 0) continue;
        Exponents f = e;
        f[var] -= 1;
        r += Poly::monomial(f, c * e[var]).set_laurent_var(p.laurent_var());
    }
    return r;
}

Poly substitute(const Poly& p, const std::array<Poly, 3>& images) {
    if (p.has_negative_exponents()) {
        throw std::invalid_argument("substitute: source polynomial has negative exponents");
    }
    for (const auto& img : images) {
        if (img.has_negative_exponents()) {
            throw std::invalid_argument("substitute: images must be ordinary polynomials");
        }
    }
    // powers[i][k] = images[i]^k, built lazily
    std::array<std::vector<Poly>, 3> powers;
    for (std::size_t i = 0; i < kNumVars; ++i) powers[i].push_back(Poly(1));
    auto power = [&](std::size_t i, int k) -> const Poly& {
        while (static_cast<int>(powers[i].size()) <= k) {
            powers[i].push_back(powers[i].back() * images[i]);
        }
        return powers[i][static_cast<std::size_t>(k)];
    };

    Poly r;
    for (const auto& [e, c] : p.terms()) {
        Poly term(c);
        for (std::size_t i = 0; i < kNumVars; ++i) {
            if (e[i] > 0) term *= power(i, e[i]);
        }
        r += term;
    }
    return r;
}

}  // namespace sardkit
