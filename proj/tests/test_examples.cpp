#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sardkit/examples.hpp"
#include "sardkit/io.hpp"

using namespace sardkit;

namespace {

Poly P(const char* s) { return parse(s); }

}  // namespace

TEST_CASE("builtins") {
    CHECK(builtin_names() == std::vector<std::string>{"heisenberg", "martinet_flat", "loop", "conical_frame"});
    const Distribution l = builtin("loop");
    CHECK(l.X == VecField::basis(1));
    CHECK(l.Y == VecField::parse({"1", "0", "y^3/3 - x^2*y*(x+z)"}));
    CHECK(builtin("heisenberg").Y == VecField::parse({"0", "1", "x"}));
    CHECK(builtin("martinet_flat").Y == VecField::parse({"0", "1", "x^2"}));
    CHECK(analyze(builtin("conical_frame")).h == P("z^2 - x^2 - y^2"));
    CHECK_THROWS_AS(builtin("nope"), std::invalid_argument);
}

TEST_CASE("chain fields") {
    CHECK(chain_field(ChainField::Printed) == VecField::parse({"-2*x*y", "-(3*x^3 + 2*y^2)", "4/3*x*y^4"}));
    const MartinetData md = analyze(builtin("loop"));
    CHECK(chain_field(ChainField::Derived) == P("-x") * md.Z);
    CHECK(chain_field_from_string("printed") == ChainField::Printed);
    CHECK(chain_field_from_string("derived") == ChainField::Derived);
    CHECK_THROWS_AS(chain_field_from_string("other"), std::invalid_argument);
    // the printed planar field is -x times the printed Z
    const VecField pz = loop_printed_Z();
    CHECK(chain_field(ChainField::Printed)[0] == P("-x") * pz[0]);
    CHECK(chain_field(ChainField::Printed)[2] == P("-x") * pz[2]);
}

TEST_CASE("curvature polynomial sign") {
    const double x = -0.5, y = 0.1;
    CHECK(18 * std::pow(x, 7) - 24 * std::pow(x, 4) * y * y < 0);
}

TEST_CASE("homoclinic orbit from -0.3") {
    const ChainLink l = homoclinic_orbit(-0.3);
    CHECK(l.z_plus < l.z_minus);
    CHECK(l.z_plus == doctest::Approx(0.3).epsilon(0.01));
    CHECK(l.z_minus == doctest::Approx(0.3).epsilon(0.01));
    CHECK(l.signs_ok);
    CHECK(l.curvature_sign_ok);
    CHECK(l.mirror_error <= 1e-5);
    CHECK(l.len_planar <= l.len_3d);
    CHECK(0.6 <= l.len_planar);
    CHECK(l.len_planar <= 0.6 + 4 * std::pow(0.3, 1.5));
    const auto& f = l.forward;
    for (std::size_t k = 1; k + 1 < f.p.size(); ++k) {
        CHECK(f.p[k][0] < 0);
        CHECK(f.p[k][1] > 0);
    }
    CHECK(z_minus_of(-0.3) == doctest::Approx(l.z_minus).epsilon(1e-12));
}

TEST_CASE("homoclinic orbit of the derived field") {
    ChainOpts o;
    o.field = ChainField::Derived;
    const ChainLink l = homoclinic_orbit(-0.3, o);
    CHECK(l.z_plus < l.z_minus);
    CHECK(l.len_planar <= l.len_3d);
    CHECK(l.signs_ok);
}

TEST_CASE("homoclinic preconditions") {
    CHECK_THROWS_AS(homoclinic_orbit(0.1), std::invalid_argument);
    CHECK_THROWS_AS(homoclinic_orbit(-1.5), std::invalid_argument);
}

TEST_CASE("shooting") {
    const ShootResult s = shoot_for_zminus(0.5, 1e-10);
    CHECK(s.xbar < 0);
    CHECK(s.xbar > -0.5);
    CHECK(std::abs(s.z_minus - 0.5) <= 1e-10);
    CHECK(s.monotone);
    const ShootResult loose = shoot_for_zminus(0.5, 10.0);
    CHECK(loose.iterations == 1);
    CHECK(loose.xbar == doctest::Approx(-0.5 * (1 + 0.01) / 2));
    CHECK_THROWS_AS(shoot_for_zminus(0.0, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(shoot_for_zminus(1.5, 1e-10), std::invalid_argument);
}

TEST_CASE("chain from 0.5") {
    const ChainReport r = run_chain(0.5, 4);
    CHECK(r.complete);
    REQUIRE(r.links.size() == 4);
    REQUIRE(r.z_seq.size() == 5);
    for (std::size_t k = 1; k < r.z_seq.size(); ++k) {
        CHECK(r.z_seq[k] < r.z_seq[k - 1]);
        CHECK(r.z_seq[k] > 0);
    }
    CHECK(r.K == doctest::Approx(chain_constant_K(0.5)));
    for (const auto& c : r.checks) CHECK_MESSAGE(c.ok, c.name << " link " << c.link << ": " << c.lhs << " vs " << c.rhs);
    CHECK(r.ineq_violations.empty());
    CHECK(r.all_ok());
    for (const auto& w : r.partial_sum_evidence) {
        if (w.reachable) CHECK(w.window_sum >= w.monotone_bound);
        CHECK(w.divergence_bound > 0);
    }
    const Json j = to_json(r);
    CHECK(j["links"].size() == 4);
    CHECK(j["checks"].size() == r.checks.size());
    CHECK_THROWS_AS(run_chain(0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(run_chain(-0.5, 2), std::invalid_argument);
}

TEST_CASE("inequality slack") {
    ChainLink l;
    l.xbar = -0.3;
    l.z_minus = 0.3;
    l.z_plus = 0.31;  // violates z_plus < z_minus
    l.len_planar = 0.7;
    l.len_3d = 0.7;
    const auto c = link_checks(l, 0, chain_constant_K(0.5), 0.05);
    CHECK(!c.front().ok);
}
