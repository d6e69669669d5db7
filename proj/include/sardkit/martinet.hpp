#ifndef SARDKIT_MARTINET_HPP
#define SARDKIT_MARTINET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sardkit/errors.hpp"
#include "sardkit/vfield.hpp"

namespace sardkit {

struct Distribution {
    VecField X;
    VecField Y;
    std::string name;
};

// Throws InvariantError when X and Y are everywhere collinear.
void validate(const Distribution& d);

// A field Z certified tangent to {h = 0}: Z.h = q h exactly. Holds the
// symbolic pieces of the surface divergence and their compiled forms.
struct SurfaceField {
    Poly h;
    VecField Z;
    Poly q;        // (Z.h)/h
    Poly grad2;    // |grad h|^2
    Poly z_grad2;  // Z.|grad h|^2
    Poly div;      // Euclidean divergence of Z
    int deg = 0;

    CompiledPoly ch, cq, cgrad2, cz_grad2, cdiv;
    std::array<CompiledPoly, 3> cgrad;
    CompiledField cZ;

    // Throws InvariantError("not tangent") when h does not divide Z.h.
    SurfaceField(const VecField& z, const Poly& h);

    double h_at(const Point& p) const { return ch(p); }
    Vec3 grad_at(const Point& p) const { return {cgrad[0](p), cgrad[1](p), cgrad[2](p)}; }
    Vec3 Z_at(const Point& p) const { return cZ(p); }
    double scale(const Point& p) const;  // 1 + |p|^deg h
};

struct MartinetData {
    Poly h_raw;
    Poly h;
    std::array<Poly, 3> grad_h;
    VecField Z;
    Poly Xh;  // X.h
    Poly Yh;  // Y.h
    SurfaceField surface;
    CompiledPoly cXh, cYh;

    bool sigma_empty() const { return h.is_constant(); }
};

// det[X, Y, [X,Y]] (columns).
Poly martinet_function(const Distribution& d);
// Squarefree part, primitive, sign fixed by the lowest grlex term.
Poly reduced_martinet(const Poly& h_raw);
// (X.h) Y - (Y.h) X, with the tangency certificate checked.
VecField characteristic_field(const Distribution& d, const Poly& h);
MartinetData analyze(const Distribution& d);

enum class Stratum { Sigma2_tr, Sigma2_tan, SingularLocus, OffSurface };
const char* to_string(Stratum s);

Stratum classify_point(const MartinetData& md, const Point& p, double tol);

bool check_bracket_generating(const Distribution& d, const Point& p, int max_depth);

struct Box {
    Point lo;
    Point hi;
    bool contains(const Point& p, double slack = 0.0) const;
};

struct ScanReport {
    double sup_ratio = 0.0;      // over locally polished samples
    double sup_ratio_raw = 0.0;  // over the projected samples themselves
    Point argmax{0, 0, 0};
    std::size_t n = 0;
    std::size_t samples_used = 0;
    std::uint64_t seed = 0;
};

// Newton iteration along grad h onto {h = 0}; nullopt when it fails.
std::optional<Point> project_to_surface(const SurfaceField& s, Point p, double tol, int max_iter = 30);

// Each of the n box draws is Newton-projected to {h = 0}; admissible points
// are then polished by a local pattern search (per sample, so the result is
// non-decreasing in n for a fixed seed).
ScanReport divergence_ratio_scan(const MartinetData& md, const Box& box, std::size_t n, std::uint64_t seed);

enum class PathVerdict { Singular, NotHorizontal, NotInSigma };
const char* to_string(PathVerdict v);

struct PathSample {
    double t;
    Point p;
};

PathVerdict is_singular_path(const MartinetData& md, const Distribution& d, const std::vector<PathSample>& path,
                             double tol);

// Component-wise comparison of a computed field against a printed one,
// modulo the principal ideal (h).
struct ComponentComparison {
    std::string computed;
    std::string printed;
    std::string difference_normal_form;  // remainder of (computed - printed) mod h
    bool equal = false;
    bool equal_mod_h = false;
};
std::array<ComponentComparison, 3> compare_mod_h(const VecField& computed, const VecField& printed, const Poly& h);

}  // namespace sardkit

#endif  // SARDKIT_MARTINET_HPP
