#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sardkit/examples.hpp"
#include "sardkit/flow.hpp"
#include "sardkit/martinet.hpp"
#include "sardkit/random.hpp"

using namespace sardkit;

namespace {

Poly P(const char* s) { return parse(s); }

const Box kLoopBox{{-1, -1, 0.1}, {-0.1, 1, 1}};

}  // namespace

TEST_CASE("martinet function of the built-in frames") {
    CHECK(martinet_function(builtin("heisenberg")).is_constant());
    CHECK(martinet_function(builtin("heisenberg")) != Poly(0));
    const Poly flat = martinet_function(builtin("martinet_flat"));
    CHECK((flat == P("2*x") || flat == P("-2*x")));
    const Poly loop = martinet_function(builtin("loop"));
    CHECK((loop == P("y^2 - x^2*(x+z)") || loop == P("-(y^2 - x^2*(x+z))")));
    CHECK(reduced_martinet(martinet_function(builtin("conical_frame"))) == P("z^2 - x^2 - y^2"));
}

TEST_CASE("reduced martinet") {
    CHECK(reduced_martinet(P("2*x")) == P("x"));
    CHECK(reduced_martinet(P("-2*x")) == P("x"));
    CHECK(reduced_martinet(P("y^2 - x^2*(x+z)")) == P("y^2 - x^2*(x+z)"));
    const Poly r = reduced_martinet(P("x^2*(1-y)"));
    CHECK((r == P("x*(1-y)") || r == P("-x*(1-y)")));
    CHECK(reduced_martinet(Poly(7)) == Poly(1));
    CHECK_THROWS_AS(reduced_martinet(Poly()), InvariantError);
}

TEST_CASE("characteristic field") {
    CHECK(analyze(builtin("heisenberg")).Z.is_zero());
    CHECK(analyze(builtin("heisenberg")).sigma_empty());
    CHECK(analyze(builtin("martinet_flat")).Z == VecField::parse({"0", "1", "x^2"}));
    const MartinetData md = analyze(builtin("loop"));
    CHECK(md.Z[0] == P("2*y"));
    CHECK(md.Z[2] == P("2*y*(y^3/3 - x^2*y*(x+z))"));
    CHECK(md.Z[1] == P("-(-3*x^2 - 2*x*z - x^2*(y^3/3 - x^2*y*(x+z)))"));
}

TEST_CASE("tangency certificate on every built-in") {
    for (const auto& name : builtin_names()) {
        const MartinetData md = analyze(builtin(name));
        CHECK_MESSAGE(divide_exact(lie_derivative(md.Z, md.h), md.h).has_value(), name);
    }
    // a field that is not tangent is rejected
    CHECK_THROWS_AS(SurfaceField(VecField::parse({"x", "y", "z"}), P("x^2+y^2+z^2-1")), InvariantError);
}

TEST_CASE("printed loop field agrees modulo h except for the dy coefficient") {
    const MartinetData md = analyze(builtin("loop"));
    const auto cmp = compare_mod_h(md.Z, loop_printed_Z(), md.h);
    CHECK(cmp[0].equal);
    CHECK(!cmp[1].equal_mod_h);
    CHECK(cmp[2].equal_mod_h);
    CHECK(!cmp[2].equal);
}

TEST_CASE("frame swap") {
    // det[Y, X, [Y, X]] = det[X, Y, [X, Y]], and Z changes sign
    for (const auto& name : builtin_names()) {
        Distribution d = builtin(name);
        Distribution s{d.Y, d.X, name};
        CHECK(martinet_function(s) == martinet_function(d));
        const Poly h = reduced_martinet(martinet_function(d));
        CHECK(characteristic_field(s, h) == -characteristic_field(d, h));
    }
}

TEST_CASE("collinear frames are rejected") {
    CHECK_THROWS_AS(validate({VecField::basis(0), VecField::parse({"x", "0", "0"}), ""}), InvariantError);
    CHECK_THROWS_AS(analyze({VecField::parse({"1", "y", "0"}), VecField::parse({"z", "y*z", "0"}), ""}),
                    InvariantError);
}

TEST_CASE("classify point") {
    const MartinetData md = analyze(builtin("loop"));
    CHECK(classify_point(md, {-1, 0, 1}, 1e-9) == Stratum::Sigma2_tr);
    CHECK(classify_point(md, {0, 0, 1}, 1e-9) == Stratum::SingularLocus);
    CHECK(classify_point(md, {0, 1, 0}, 1e-9) == Stratum::OffSurface);
    CHECK_THROWS_AS(classify_point(md, {0, 0, 0}, 0.0), std::invalid_argument);
    // martinet flat: X.h = 1 everywhere, so no tangency points
    const MartinetData fl = analyze(builtin("martinet_flat"));
    CHECK(classify_point(fl, {0, 0.4, -2}, 1e-9) == Stratum::Sigma2_tr);
    // conical frame: the cone apex is singular
    const MartinetData co = analyze(builtin("conical_frame"));
    CHECK(classify_point(co, {0, 0, 0}, 1e-9) == Stratum::SingularLocus);
}

TEST_CASE("Z vanishes at tangency and singular points") {
    for (const auto& name : {"loop", "conical_frame", "martinet_flat"}) {
        const MartinetData md = analyze(builtin(name));
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        int seen = 0;
        for (int k = 0; k < 2000; ++k) {
            auto p = project_to_surface(md.surface, {u(rng), u(rng), u(rng)}, 1e-13);
            if (!p) continue;
            const Stratum s = classify_point(md, *p, 1e-7);
            if (s == Stratum::Sigma2_tan || s == Stratum::SingularLocus) {
                ++seen;
                CHECK(norm(md.surface.Z_at(*p)) <= 1e-6 * md.surface.scale(*p));
            }
        }
        // the axis of the loop surface is sampled directly
        if (std::string(name) == "loop") {
            for (double z : {0.1, 0.5, 2.0}) CHECK(norm(md.surface.Z_at({0, 0, z})) == 0.0);
        }
        (void)seen;
    }
}

TEST_CASE("zero set of h equals zero set of h_raw") {
    for (const auto& name : {"martinet_flat", "loop", "conical_frame"}) {
        const MartinetData md = analyze(builtin(name));
        const CompiledPoly raw(md.h_raw);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1, 1);
        for (int k = 0; k < 200; ++k) {
            const Point p{u(rng), u(rng), u(rng)};
            auto q = project_to_surface(md.surface, p, 1e-14);
            if (q) CHECK(std::abs(raw(*q)) <= 1e-9 * md.surface.scale(*q));
            const bool h0 = std::abs(md.surface.h_at(p)) <= 1e-9 * md.surface.scale(p);
            const bool r0 = std::abs(raw(p)) <= 1e-9 * md.surface.scale(p);
            CHECK(h0 == r0);
        }
    }
}

TEST_CASE("bracket generating") {
    CHECK(check_bracket_generating(builtin("heisenberg"), {0, 0, 0}, 2));
    CHECK(!check_bracket_generating(builtin("martinet_flat"), {0, 0, 0}, 2));
    CHECK(check_bracket_generating(builtin("martinet_flat"), {0, 0, 0}, 3));
    CHECK(check_bracket_generating(builtin("martinet_flat"), {0.5, 0, 0}, 2));
    const Distribution integrable{VecField::basis(0), VecField::basis(1), ""};
    CHECK(!check_bracket_generating(integrable, {1, 2, 3}, 5));
    CHECK_THROWS_AS(check_bracket_generating(integrable, {0, 0, 0}, 1), std::invalid_argument);
}

TEST_CASE("divergence ratio scan") {
    const MartinetData fl = analyze(builtin("martinet_flat"));
    const Box cube{{-1, -1, -1}, {1, 1, 1}};
    const ScanReport a = divergence_ratio_scan(fl, cube, 200, 0);
    CHECK(a.samples_used > 0);
    CHECK(a.sup_ratio == doctest::Approx(0.0));

    const MartinetData md = analyze(builtin("loop"));
    const ScanReport r1 = divergence_ratio_scan(md, kLoopBox, 100, 7);
    const ScanReport r2 = divergence_ratio_scan(md, kLoopBox, 200, 7);
    const ScanReport r1b = divergence_ratio_scan(md, kLoopBox, 100, 7);
    CHECK(std::isfinite(r1.sup_ratio));
    CHECK(r1.sup_ratio == r1b.sup_ratio);
    CHECK(r1.argmax == r1b.argmax);
    CHECK(r2.sup_ratio >= r1.sup_ratio);
    CHECK(r1.sup_ratio >= r1.sup_ratio_raw);
    CHECK(kLoopBox.contains(r1.argmax));
    CHECK(std::abs(md.surface.h_at(r1.argmax)) < 1e-10);

    // Z = 0 on the heisenberg "surface" h = 1: nothing to project onto
    CHECK_THROWS_AS(divergence_ratio_scan(analyze(builtin("heisenberg")), cube, 50, 0), NoSamplesError);
}

TEST_CASE("singular path classifier") {
    const Distribution d = builtin("loop");
    const MartinetData md = analyze(d);
    std::vector<PathSample> still{{0, {-1, 0, 1}}, {1, {-1, 0, 1}}};
    CHECK(is_singular_path(md, d, still, 1e-8) == PathVerdict::Singular);

    std::vector<PathSample> across;
    for (int k = 0; k <= 10; ++k) across.push_back({k * 0.1, {-0.5, k * 0.1, 0.5}});
    CHECK(is_singular_path(md, d, across, 1e-8) == PathVerdict::NotInSigma);

    IntegratorOpts o;
    o.max_time = 2.0;
    const OrbitTrace tr = integrate_orbit(md, {-0.3, 0, 0.3}, o, 1);
    std::vector<PathSample> orbit;
    for (const auto& s : tr.samples) orbit.push_back({s.t, s.p});
    REQUIRE(orbit.size() > 10);
    CHECK(is_singular_path(md, d, orbit, 1e-4) == PathVerdict::Singular);

    // on the plane x = 0 of martinet_flat, moving in x3 alone is not horizontal
    const Distribution fd = builtin("martinet_flat");
    const MartinetData fl = analyze(fd);
    std::vector<PathSample> vert;
    for (int k = 0; k <= 10; ++k) vert.push_back({k * 0.1, {0, 0, k * 0.1}});
    CHECK(is_singular_path(fl, fd, vert, 1e-6) == PathVerdict::NotHorizontal);

    CHECK_THROWS_AS(is_singular_path(md, d, {{0, {-1, 0, 1}}}, 1e-8), std::invalid_argument);
}
