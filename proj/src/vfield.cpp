#include "sardkit/vfield.hpp"

#include <cmath>

namespace sardkit {

VecField::VecField(Poly a, Poly b, Poly d) : c{std::move(a), std::move(b), std::move(d)} {}

VecField VecField::basis(std::size_t i) {
    VecField v;
    v.c.at(i) = Poly(1);
    return v;
}

VecField VecField::parse(const std::array<std::string, 3>& exprs, std::optional<std::size_t> laurent_var) {
    return VecField(sardkit::parse(exprs[0], laurent_var), sardkit::parse(exprs[1], laurent_var),
                    sardkit::parse(exprs[2], laurent_var));
}

bool VecField::is_zero() const { return c[0].is_zero() && c[1].is_zero() && c[2].is_zero(); }

std::optional<std::size_t> VecField::laurent_var() const {
    for (const auto& p : c) {
        if (p.laurent_var()) return p.laurent_var();
    }
    return std::nullopt;
}

int VecField::pole_order() const {
    return std::max({c[0].pole_order(), c[1].pole_order(), c[2].pole_order()});
}

VecField& VecField::set_laurent_var(std::optional<std::size_t> v) {
    for (auto& p : c) p.set_laurent_var(v);
    return *this;
}

VecField& VecField::operator+=(const VecField& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
}

VecField& VecField::operator-=(const VecField& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
}

VecField operator*(const Poly& f, const VecField& v) { return VecField(f * v.c[0], f * v.c[1], f * v.c[2]); }

VecField VecField::operator-() const { return VecField(-c[0], -c[1], -c[2]); }

std::array<std::string, 3> VecField::to_strings() const {
    return {c[0].to_string(), c[1].to_string(), c[2].to_string()};
}

std::string VecField::to_string() const {
    return "(" + c[0].to_string() + ")*d/dx + (" + c[1].to_string() + ")*d/dy + (" + c[2].to_string() + ")*d/dz";
}

Poly lie_derivative(const VecField& v, const Poly& f) {
    Poly r;
    for (std::size_t i = 0; i < 3; ++i) {
        if (v.c[i].is_zero()) continue;
        r += v.c[i] * diff(f, i);
    }
    return r;
}

VecField lie_bracket(const VecField& v, const VecField& w) {
    VecField r;
    for (std::size_t k = 0; k < 3; ++k) r.c[k] = lie_derivative(v, w.c[k]) - lie_derivative(w, v.c[k]);
    return r;
}

Poly divergence_euclidean(const VecField& v) { return diff(v.c[0], 0) + diff(v.c[1], 1) + diff(v.c[2], 2); }

PolyMatrix jacobian(const VecField& v) {
    PolyMatrix m;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) m[i][j] = diff(v.c[i], j);
    }
    return m;
}

Poly det3(const PolyMatrix& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Vec3 eval(const VecField& v, const Point& p) {
    if (auto lv = v.laurent_var(); lv && v.pole_order() > 0 && p[*lv] == 0.0) {
        throw std::domain_error("pole: Laurent variable vanishes at evaluation point");
    }
    return {v.c[0].eval(p), v.c[1].eval(p), v.c[2].eval(p)};
}

std::array<Rational, 3> eval_exact(const VecField& v, const std::array<Rational, 3>& p) {
    return {v.c[0].eval_exact(p), v.c[1].eval_exact(p), v.c[2].eval_exact(p)};
}

CompiledPoly::CompiledPoly(const Poly& p) {
    for (const auto& [e, c] : p.terms()) {
        terms_.push_back({c.get_d(), e});
        for (std::size_t i = 0; i < 3; ++i) {
            max_exp_[i] = std::max(max_exp_[i], e[i]);
            min_exp_[i] = std::min(min_exp_[i], e[i]);
        }
    }
    has_poles_ = min_exp_[0] < 0 || min_exp_[1] < 0 || min_exp_[2] < 0;
}

double CompiledPoly::operator()(const Point& x) const {
    // power tables, offset by the most negative exponent
    std::array<std::array<double, 40>, 3> pw{};
    bool small = true;
    for (std::size_t i = 0; i < 3; ++i) {
        if (max_exp_[i] - min_exp_[i] >= 40) small = false;
    }
    if (!small) {
        double s = 0.0;
        for (const auto& t : terms_) {
            s += t.c * std::pow(x[0], t.e[0]) * std::pow(x[1], t.e[1]) * std::pow(x[2], t.e[2]);
        }
        return s;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        const int lo = min_exp_[i];
        if (lo < 0 && x[i] == 0.0) throw std::domain_error("pole: Laurent variable vanishes at evaluation point");
        pw[i][static_cast<std::size_t>(-lo)] = 1.0;
        for (int k = 1; k <= max_exp_[i]; ++k) pw[i][static_cast<std::size_t>(k - lo)] = pw[i][static_cast<std::size_t>(k - 1 - lo)] * x[i];
        for (int k = -1; k >= lo; --k) pw[i][static_cast<std::size_t>(k - lo)] = pw[i][static_cast<std::size_t>(k + 1 - lo)] / x[i];
    }
    double s = 0.0;
    for (const auto& t : terms_) {
        s += t.c * pw[0][static_cast<std::size_t>(t.e[0] - min_exp_[0])] *
             pw[1][static_cast<std::size_t>(t.e[1] - min_exp_[1])] *
             pw[2][static_cast<std::size_t>(t.e[2] - min_exp_[2])];
    }
    return s;
}

CompiledField::CompiledField(const VecField& v) : c_{CompiledPoly(v.c[0]), CompiledPoly(v.c[1]), CompiledPoly(v.c[2])} {}

Vec3 CompiledField::operator()(const Point& x) const { return {c_[0](x), c_[1](x), c_[2](x)}; }

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

}  // namespace sardkit
