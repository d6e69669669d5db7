#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sardkit/random.hpp"
#include "sardkit/vfield.hpp"

using namespace sardkit;

namespace {

Poly P(const char* s) { return parse(s); }

VecField rfield(std::mt19937_64& rng, int deg) {
    return VecField(random_poly(rng, deg, 4), random_poly(rng, deg, 4), random_poly(rng, deg, 4));
}

const VecField kLoopX = VecField::basis(1);
const VecField kLoopY = VecField::parse({"1", "0", "y^3/3 - x^2*y*(x+z)"});

}  // namespace

TEST_CASE("lie derivative") {
    const Poly h = P("y^2 - x^2*(x+z)");
    CHECK(lie_derivative(kLoopX, h) == P("2*y"));
    CHECK(lie_derivative(kLoopY, Poly(5)).is_zero());
    CHECK(lie_derivative(kLoopY, h) == P("-3*x^2 - 2*x*z + (y^3/3 - x^2*y*(x+z))*(-x^2)"));
}

TEST_CASE("lie bracket") {
    CHECK(lie_bracket(kLoopX, kLoopY) == VecField(Poly(), Poly(), P("y^2 - x^2*(x+z)")));
    CHECK(lie_bracket(kLoopY, kLoopY).is_zero());
    CHECK(lie_bracket(VecField::basis(0), VecField::parse({"0", "1", "x^2"})) == VecField(0, 0, P("2*x")));
}

TEST_CASE("divergence") {
    CHECK(divergence_euclidean(VecField::parse({"x", "y", "0"})) == Poly(2));
    CHECK(divergence_euclidean(VecField::parse({"1", "0", "y^3/3 - 7"})).is_zero());
    CHECK(divergence_euclidean(VecField::parse({"-2*x*y", "-(3*x^3 + 2*y^2)", "0"})) == P("-6*y"));
}

TEST_CASE("jacobian") {
    const PolyMatrix z = jacobian(VecField::parse({"1", "-2", "3/4"}));
    for (const auto& row : z) {
        for (const auto& e : row) CHECK(e.is_zero());
    }
    const PolyMatrix m = jacobian(VecField::parse({"0", "x", "0"}));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(m[i][j] == Poly((i == 1 && j == 0) ? 1 : 0));
    }
    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
        const VecField v = rfield(rng, 3);
        const PolyMatrix j = jacobian(v);
        CHECK(j[0][0] + j[1][1] + j[2][2] == divergence_euclidean(v));
    }
}

TEST_CASE("eval") {
    CHECK(eval(kLoopX, {0.3, -2.0, 7.0}) == Vec3{0, 1, 0});
    CHECK(eval(VecField(0, 0, P("y^2 - x^2*(x+z)")), {1, 1, 0}) == Vec3{0, 0, 0});
    CHECK(eval(VecField::parse({"x", "0", "0"}), {2, 0, 0}) == Vec3{2, 0, 0});
    const VecField lv = VecField::parse({"x^-1", "y", "0"}, 0);
    CHECK_THROWS_AS(eval(lv, {0, 1, 1}), std::domain_error);
    CHECK(eval(lv, {2, 1, 1})[0] == doctest::Approx(0.5));
    const CompiledField clv{lv};
    CHECK_THROWS_AS(clv({0, 1, 1}), std::domain_error);
}

TEST_CASE("invariants on random fields") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 100; ++k) {
        const VecField u = rfield(rng, 3);
        const VecField v = rfield(rng, 3);
        const VecField w = rfield(rng, 3);
        const Poly f = random_poly(rng, 2, 4);
        // Jacobi
        CHECK((lie_bracket(u, lie_bracket(v, w)) + lie_bracket(v, lie_bracket(w, u)) +
               lie_bracket(w, lie_bracket(u, v)))
                  .is_zero());
        // Leibniz
        CHECK(lie_bracket(v, f * w) == lie_derivative(v, f) * w + f * lie_bracket(v, w));
        // div [V,W] = V(div W) - W(div V)
        CHECK(divergence_euclidean(lie_bracket(v, w)) ==
              lie_derivative(v, divergence_euclidean(w)) - lie_derivative(w, divergence_euclidean(v)));
        // eval is additive and matches exact evaluation
        const std::array<Rational, 3> q{Rational(k % 7 - 3, 4), Rational(k % 5 - 2, 3), Rational(k % 3, 5)};
        const Point p{q[0].get_d(), q[1].get_d(), q[2].get_d()};
        const auto exact = eval_exact(v + w, q);
        const Vec3 num = eval(v + w, p);
        const Vec3 a = eval(v, p);
        const Vec3 b = eval(w, p);
        const Vec3 fast = CompiledField(v + w)(p);
        for (std::size_t i = 0; i < 3; ++i) {
            const double ref = exact[i].get_d();
            const double scale = std::max(1.0, std::abs(ref));
            CHECK(std::abs(num[i] - ref) <= 1e-12 * scale);
            CHECK(std::abs(a[i] + b[i] - ref) <= 1e-12 * scale);
            CHECK(std::abs(fast[i] - ref) <= 1e-12 * scale);
        }
    }
}
