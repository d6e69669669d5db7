#ifndef SARDKIT_VFIELD_HPP
#define SARDKIT_VFIELD_HPP

#include <array>
#include <string>
#include <vector>

#include "sardkit/poly.hpp"

namespace sardkit {

using Point = std::array<double, 3>;
using Vec3 = std::array<double, 3>;

// Polynomial vector field V = V1 d/dx1 + V2 d/dx2 + V3 d/dx3.
struct VecField {
    std::array<Poly, 3> c;

    VecField() = default;
    VecField(Poly a, Poly b, Poly d);

    static VecField basis(std::size_t i);
    static VecField parse(const std::array<std::string, 3>& exprs,
                          std::optional<std::size_t> laurent_var = std::nullopt);

    const Poly& operator[](std::size_t i) const { return c[i]; }
    Poly& operator[](std::size_t i) { return c[i]; }

    bool is_zero() const;
    std::optional<std::size_t> laurent_var() const;
    int pole_order() const;
    VecField& set_laurent_var(std::optional<std::size_t> v);

    VecField& operator+=(const VecField& o);
    VecField& operator-=(const VecField& o);
    friend VecField operator+(VecField a, const VecField& b) { return a += b; }
    friend VecField operator-(VecField a, const VecField& b) { return a -= b; }
    friend VecField operator*(const Poly& f, const VecField& v);
    VecField operator-() const;
    friend bool operator==(const VecField& a, const VecField& b) { return a.c == b.c; }
    friend bool operator!=(const VecField& a, const VecField& b) { return !(a == b); }

    std::array<std::string, 3> to_strings() const;
    std::string to_string() const;
};

using PolyMatrix = std::array<std::array<Poly, 3>, 3>;

// V . f = sum_i V_i df/dx_i
Poly lie_derivative(const VecField& v, const Poly& f);
VecField lie_bracket(const VecField& v, const VecField& w);
Poly divergence_euclidean(const VecField& v);
PolyMatrix jacobian(const VecField& v);
Poly det3(const PolyMatrix& m);

// Double-precision evaluation; throws std::domain_error at a pole.
Vec3 eval(const VecField& v, const Point& p);
std::array<Rational, 3> eval_exact(const VecField& v, const std::array<Rational, 3>& p);

// Poly flattened for fast repeated double evaluation.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const Poly& p);
    double operator()(const Point& x) const;
    bool has_poles() const { return has_poles_; }

private:
    struct Term {
        double c;
        Exponents e;
    };
    std::vector<Term> terms_;
    std::array<int, 3> max_exp_{0, 0, 0};
    std::array<int, 3> min_exp_{0, 0, 0};
    bool has_poles_ = false;
};

class CompiledField {
public:
    CompiledField() = default;
    explicit CompiledField(const VecField& v);
    Vec3 operator()(const Point& x) const;

private:
    std::array<CompiledPoly, 3> c_;
};

// Small vector helpers used by the numeric layers.
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a);

}  // namespace sardkit

#endif  // SARDKIT_VFIELD_HPP
