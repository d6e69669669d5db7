#include "sardkit/martinet.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "sardkit/flow.hpp"
#include "sardkit/random.hpp"

namespace sardkit {

void validate(const Distribution& d) {
    // X x Y identically zero means the frame never spans a plane
    const VecField& x = d.X;
    const VecField& y = d.Y;
    const Poly c0 = x[1] * y[2] - x[2] * y[1];
    const Poly c1 = x[2] * y[0] - x[0] * y[2];
    const Poly c2 = x[0] * y[1] - x[1] * y[0];
    if (c0.is_zero() && c1.is_zero() && c2.is_zero()) {
        throw InvariantError("X and Y are everywhere collinear; not a rank-two frame");
    }
}

SurfaceField::SurfaceField(const VecField& z, const Poly& hh) : h(hh), Z(z) {
    if (h.is_zero()) throw std::invalid_argument("surface defining function is zero");
    auto quot = divide_exact(lie_derivative(Z, h), h);
    if (!quot) throw InvariantError("tangency certificate failed: h does not divide Z.h");
    q = *quot;
    std::array<Poly, 3> g{diff(h, 0), diff(h, 1), diff(h, 2)};
    grad2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
    z_grad2 = lie_derivative(Z, grad2);
    div = divergence_euclidean(Z);
    deg = std::max(0, h.total_degree());
    ch = CompiledPoly(h);
    cq = CompiledPoly(q);
    cgrad2 = CompiledPoly(grad2);
    cz_grad2 = CompiledPoly(z_grad2);
    cdiv = CompiledPoly(div);
    for (std::size_t i = 0; i < 3; ++i) cgrad[i] = CompiledPoly(g[i]);
    cZ = CompiledField(Z);
}

double SurfaceField::scale(const Point& p) const { return 1.0 + std::pow(norm(p), deg); }

Poly martinet_function(const Distribution& d) {
    const VecField b = lie_bracket(d.X, d.Y);
    PolyMatrix m;
    for (std::size_t i = 0; i < 3; ++i) {
        m[i][0] = d.X[i];
        m[i][1] = d.Y[i];
        m[i][2] = b[i];
    }
    return det3(m);
}

Poly reduced_martinet(const Poly& h_raw) {
    if (h_raw.is_zero()) throw InvariantError("Martinet function vanishes identically (frame is never bracket generating)");
    if (h_raw.is_constant()) return Poly(1);
    return normalize_primitive_trailing(squarefree_part(h_raw));
}

VecField characteristic_field(const Distribution& d, const Poly& h) {
    if (h.is_zero()) throw std::invalid_argument("characteristic_field: h = 0");
    const VecField z = lie_derivative(d.X, h) * d.Y - lie_derivative(d.Y, h) * d.X;
    if (!divide_exact(lie_derivative(z, h), h)) throw InvariantError("tangency certificate failed for Z");
    return z;
}

MartinetData analyze(const Distribution& d) {
    validate(d);
    const Poly h_raw = martinet_function(d);
    const Poly h = reduced_martinet(h_raw);
    VecField z = characteristic_field(d, h);
    MartinetData md{h_raw,
                    h,
                    {diff(h, 0), diff(h, 1), diff(h, 2)},
                    z,
                    lie_derivative(d.X, h),
                    lie_derivative(d.Y, h),
                    SurfaceField(z, h),
                    {},
                    {}};
    md.cXh = CompiledPoly(md.Xh);
    md.cYh = CompiledPoly(md.Yh);
    return md;
}

const char* to_string(Stratum s) {
    switch (s) {
        case Stratum::Sigma2_tr: return "Sigma2_tr";
        case Stratum::Sigma2_tan: return "Sigma2_tan";
        case Stratum::SingularLocus: return "SingularLocus";
        case Stratum::OffSurface: return "OffSurface";
    }
    return "?";
}

Stratum classify_point(const MartinetData& md, const Point& p, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("classify_point: tol must be positive");
    const SurfaceField& s = md.surface;
    if (std::abs(s.h_at(p)) > tol * s.scale(p)) return Stratum::OffSurface;
    if (norm(s.grad_at(p)) <= tol) return Stratum::SingularLocus;
    if (std::abs(md.cXh(p)) <= tol && std::abs(md.cYh(p)) <= tol) return Stratum::Sigma2_tan;
    return Stratum::Sigma2_tr;
}

bool check_bracket_generating(const Distribution& d, const Point& p, int max_depth) {
    if (max_depth < 2) throw std::invalid_argument("check_bracket_generating: max_depth must be >= 2");
    std::vector<VecField> all{d.X, d.Y};
    std::vector<VecField> level{d.X, d.Y};
    for (int depth = 2; depth <= max_depth; ++depth) {
        std::vector<VecField> next;
        for (const auto& v : level) {
            for (const auto* g : {&d.X, &d.Y}) {
                VecField b = lie_bracket(*g, v);
                if (!b.is_zero()) next.push_back(std::move(b));
            }
        }
        all.insert(all.end(), next.begin(), next.end());
        level = std::move(next);
    }
    Eigen::MatrixXd m(3, static_cast<Eigen::Index>(all.size()));
    for (std::size_t k = 0; k < all.size(); ++k) {
        const Vec3 v = eval(all[k], p);
        for (int i = 0; i < 3; ++i) m(i, static_cast<Eigen::Index>(k)) = v[static_cast<std::size_t>(i)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto sv = svd.singularValues();
    if (sv.size() < 3) return false;
    return sv(2) > 1e-9 * std::max(1.0, sv(0));
}

bool Box::contains(const Point& p, double slack) const {
    for (std::size_t i = 0; i < 3; ++i) {
        if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
    }
    return true;
}

std::optional<Point> project_to_surface(const SurfaceField& s, Point p, double tol, int max_iter) {
    // converged when both |h| and the Newton step |h|/|grad h| are small; the
    // second keeps points on their own sheet near a crossing of two sheets
    for (int it = 0; it <= max_iter; ++it) {
        const double hv = s.h_at(p);
        if (!std::isfinite(hv)) return std::nullopt;
        const Vec3 g = s.grad_at(p);
        const double g2 = dot(g, g);
        const double lim = tol * s.scale(p);
        if (std::abs(hv) <= lim && (hv == 0.0 || (g2 > 0 && std::abs(hv) <= lim * std::sqrt(g2)))) return p;
        if (it == max_iter || !(g2 > 0)) break;
        for (std::size_t i = 0; i < 3; ++i) p[i] -= hv * g[i] / g2;
    }
    return std::nullopt;
}

namespace {

// |div^S Z| / |Z| at an admissible surface point, nullopt otherwise.
std::optional<double> scan_ratio(const SurfaceField& s, const Box& box, const Point& p) {
    if (!box.contains(p)) return std::nullopt;
    if (norm(s.grad_at(p)) < 1e-6) return std::nullopt;
    const double zn = norm(s.Z_at(p));
    if (zn < 1e-12) return std::nullopt;
    return std::abs(surface_divergence(s, p)) / zn;
}

// Pattern search for a larger ratio in the tangent plane, staying on the
// surface and in the box. Depends only on the starting sample.
std::pair<double, Point> polish(const SurfaceField& s, const Box& box, Point p, double r) {
    double step = 0.02;
    for (int it = 0; it < 400 && step > 1e-7; ++it) {
        const Vec3 n = s.grad_at(p);
        Vec3 e1 = std::abs(n[0]) < 0.9 * norm(n) ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        const double k = dot(e1, n) / dot(n, n);
        for (std::size_t i = 0; i < 3; ++i) e1[i] -= k * n[i];
        const double l1 = norm(e1);
        for (auto& c : e1) c /= l1;
        Vec3 e2{n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2], n[0] * e1[1] - n[1] * e1[0]};
        const double l2 = norm(e2);
        for (auto& c : e2) c /= l2;
        bool improved = false;
        for (const auto& [a, b] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
            Point q;
            for (std::size_t i = 0; i < 3; ++i) q[i] = p[i] + step * (a * e1[i] + b * e2[i]);
            auto qp = project_to_surface(s, q, 1e-13);
            if (!qp) continue;
            auto rq = scan_ratio(s, box, *qp);
            if (rq && *rq > r) {
                r = *rq;
                p = *qp;
                improved = true;
                break;
            }
        }
        if (!improved) step *= 0.5;
    }
    return {r, p};
}

}  // namespace

ScanReport divergence_ratio_scan(const MartinetData& md, const Box& box, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("divergence_ratio_scan: n must be >= 1");
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(box.lo[i] <= box.hi[i]) || !std::isfinite(box.lo[i]) || !std::isfinite(box.hi[i])) {
            throw std::invalid_argument("divergence_ratio_scan: box must be bounded");
        }
    }
    ScanReport rep;
    rep.n = n;
    rep.seed = seed;
    if (md.sigma_empty()) throw NoSamplesError("no admissible samples (Martinet surface is empty)");
    const SurfaceField& s = md.surface;
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        auto rng = substream(seed, i);
        Point p;
        for (std::size_t k = 0; k < 3; ++k) p[k] = std::uniform_real_distribution<double>(box.lo[k], box.hi[k])(rng);
        auto q = project_to_surface(s, p, 1e-13);
        if (!q) continue;
        auto r0 = scan_ratio(s, box, *q);
        if (!r0) continue;
        ++rep.samples_used;
        rep.sup_ratio_raw = std::max(rep.sup_ratio_raw, *r0);
        const auto [r, at] = polish(s, box, *q, *r0);
        if (!any || r > rep.sup_ratio) {
            rep.sup_ratio = r;
            rep.argmax = at;
            any = true;
        }
    }
    if (!any) throw NoSamplesError("no admissible samples");
    return rep;
}

const char* to_string(PathVerdict v) {
    switch (v) {
        case PathVerdict::Singular: return "Singular";
        case PathVerdict::NotHorizontal: return "NotHorizontal";
        case PathVerdict::NotInSigma: return "NotInSigma";
    }
    return "?";
}

PathVerdict is_singular_path(const MartinetData& md, const Distribution& d, const std::vector<PathSample>& path,
                             double tol) {
    if (path.size() < 2) throw std::invalid_argument("is_singular_path: need at least two samples");
    for (std::size_t k = 1; k < path.size(); ++k) {
        if (!(path[k].t > path[k - 1].t)) throw std::invalid_argument("is_singular_path: degenerate sampling (times not increasing)");
    }
    const SurfaceField& s = md.surface;
    for (const auto& smp : path) {
        if (md.sigma_empty() || std::abs(s.h_at(smp.p)) > tol * s.scale(smp.p)) return PathVerdict::NotInSigma;
    }
    const CompiledField cx(d.X);
    const CompiledField cy(d.Y);
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double dt = path[k].t - path[k - 1].t;
        Point mid;
        Eigen::Vector3d v;
        for (std::size_t i = 0; i < 3; ++i) {
            mid[i] = 0.5 * (path[k].p[i] + path[k - 1].p[i]);
            v(static_cast<int>(i)) = (path[k].p[i] - path[k - 1].p[i]) / dt;
        }
        const Vec3 a = cx(mid);
        const Vec3 b = cy(mid);
        Eigen::Matrix<double, 3, 2> f;
        f << a[0], b[0], a[1], b[1], a[2], b[2];
        const Eigen::Vector2d coef = f.colPivHouseholderQr().solve(v);
        const double residual = (f * coef - v).norm();
        if (residual > tol * std::max(1.0, v.norm())) return PathVerdict::NotHorizontal;
    }
    return PathVerdict::Singular;
}

std::array<ComponentComparison, 3> compare_mod_h(const VecField& computed, const VecField& printed, const Poly& h) {
    std::array<ComponentComparison, 3> out;
    for (std::size_t i = 0; i < 3; ++i) {
        const Poly diffp = computed[i] - printed[i];
        const Poly nf = remainder_mod(diffp, h);
        out[i] = {computed[i].to_string(), printed[i].to_string(), nf.to_string(), diffp.is_zero(), nf.is_zero()};
    }
    return out;
}

}  // namespace sardkit
