#include "sardkit/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sardkit/flow.hpp"
#include "sardkit/random.hpp"

namespace sardkit {

namespace {

Poly xj_pow(std::size_t j, int k) {
    Exponents e{0, 0, 0};
    e[j] = k;
    return Poly::monomial(e);
}

PolyMatrix adjugate(const PolyMatrix& m) {
    PolyMatrix a;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            // cofactor of (j, i)
            const std::size_t r0 = (j + 1) % 3, r1 = (j + 2) % 3;
            const std::size_t c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            a[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    }
    return a;
}

}  // namespace

Point ChartMap::apply(const Point& x) const {
    Point u;
    for (std::size_t i = 0; i < 3; ++i) u[i] = images[i].eval(x);
    return u;
}

std::string ChartMap::describe() const {
    if (identity) return "identity";
    std::ostringstream os;
    os << "center {";
    for (std::size_t k = 0; k < center.size(); ++k) os << (k ? "," : "") << center[k] + 1;
    os << "}, j=" << j + 1 << ", " << (sign > 0 ? '+' : '-');
    return os.str();
}

ChartMap chart_map(std::vector<std::size_t> center, std::size_t j, int sign) {
    std::sort(center.begin(), center.end());
    if (center.size() < 2 || center.size() > 3) throw DegenerateChartError("invalid center: need 2 or 3 coordinates");
    if (std::adjacent_find(center.begin(), center.end()) != center.end()) {
        throw DegenerateChartError("invalid center: repeated coordinate");
    }
    if (center.back() >= 3) throw DegenerateChartError("invalid center: coordinate index out of range");
    if (std::find(center.begin(), center.end(), j) == center.end()) {
        throw DegenerateChartError("invalid chart: direction must belong to the center");
    }
    if (sign != 1 && sign != -1) throw DegenerateChartError("invalid chart: sign must be +1 or -1");

    ChartMap c;
    c.center = center;
    c.j = j;
    c.sign = sign;
    c.beta = static_cast<int>(center.size()) - 1;
    for (std::size_t i = 0; i < 3; ++i) c.images[i] = Poly::var(i);
    for (std::size_t i : center) {
        if (i == j) {
            c.images[i] = Poly(sign) * Poly::var(j);
        } else {
            c.images[i] = Poly::var(i) * Poly::var(j);
        }
    }
    return c;
}

ChartMap identity_chart() {
    ChartMap c;
    c.identity = true;
    c.j = 2;
    for (std::size_t i = 0; i < 3; ++i) c.images[i] = Poly::var(i);
    c.alpha = 0;
    return c;
}

Poly total_transform(const Poly& f, const ChartMap& c) { return substitute(f, c.images); }

TransformResult strict_transform(const Poly& f, const ChartMap& c) {
    if (f.is_zero()) throw std::invalid_argument("strict_transform: zero input");
    TransformResult r;
    r.total = total_transform(f, c);
    r.alpha = c.identity ? 0 : r.total.min_exponent(c.j);
    r.strict = r.total.shifted(c.j, -r.alpha);
    if (r.alpha >= 1) r.weighted = r.total.shifted(c.j, -1);
    if (!c.identity && !divide_exact(r.total, xj_pow(c.j, r.alpha))) {
        throw InvariantError("factorization certificate failed");
    }
    return r;
}

TransformResult strict_transform(const Poly& f, ChartMap& c) {
    TransformResult r = strict_transform(f, static_cast<const ChartMap&>(c));
    c.alpha = r.alpha;
    return r;
}

PolyMatrix chart_jacobian(const ChartMap& c) {
    PolyMatrix m;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k < 3; ++k) m[i][k] = diff(c.images[i], k);
    }
    return m;
}

VolumeFactor volume_factor(const ChartMap& c) {
    const Poly det = det3(chart_jacobian(c));
    const Poly expected = c.identity ? Poly(1) : Poly(c.sign) * xj_pow(c.j, c.beta);
    if (det != expected) throw InvariantError("chart Jacobian is not +-x_j^beta: " + det.to_string());
    return {c.beta, det};
}

VecField pullback_vecfield(const VecField& v, const ChartMap& c) {
    if (v.laurent_var()) throw std::invalid_argument("pullback_vecfield: input must be an ordinary field");
    if (c.identity) return v;
    const PolyMatrix adj = adjugate(chart_jacobian(c));
    const Poly det = volume_factor(c).jacobian_monomial;
    std::array<Poly, 3> composed;
    for (std::size_t i = 0; i < 3; ++i) composed[i] = substitute(v[i], c.images);
    VecField out;
    for (std::size_t i = 0; i < 3; ++i) {
        Poly num;
        for (std::size_t k = 0; k < 3; ++k) num += adj[i][k] * composed[k];
        num.set_laurent_var(c.j);
        auto q = divide_exact(num, det);
        if (!q) throw InvariantError("pullback: division by the chart determinant failed");
        out[i] = q->set_laurent_var(c.j);
    }
    const int bound = 1 + static_cast<int>(c.center.size());
    if (out.pole_order() > bound) throw InvariantError("pullback: pole order exceeds 1 + codim");
    return out;
}

Vec3 pushforward_at(const VecField& w, const ChartMap& c, const Point& x) {
    const PolyMatrix m = chart_jacobian(c);
    const Vec3 wv = eval(w, x);
    Vec3 out{0, 0, 0};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k < 3; ++k) out[i] += m[i][k].eval(x) * wv[k];
    }
    return out;
}

TransformedCharacteristic transformed_characteristic(const Distribution& d, const Poly& h, const ChartMap& c) {
    const TransformResult tr = strict_transform(h, c);
    if (tr.alpha < 1) throw DegenerateChartError("center not in zero set (alpha = 0)");
    const Poly a = xj_pow(c.j, tr.alpha);
    const Poly& ht = tr.strict;

    const VecField z = characteristic_field(d, h);
    const VecField xs = pullback_vecfield(d.X, c);
    const VecField ys = pullback_vecfield(d.Y, c);

    TransformedCharacteristic out;
    out.alpha = tr.alpha;
    out.beta = c.beta;
    out.h_tilde = ht;
    out.Zstar = pullback_vecfield(z, c);
    out.Ztilde = a * (lie_derivative(xs, ht) * ys - lie_derivative(ys, ht) * xs);
    out.Wtilde = lie_derivative(xs, a) * ys - lie_derivative(ys, a) * xs;
    out.Ztilde.set_laurent_var(c.j);
    out.Wtilde.set_laurent_var(c.j);

    // Z* - Z~ must be h~ W~ exactly
    const VecField residual = out.Zstar - out.Ztilde;
    for (std::size_t i = 0; i < 3; ++i) {
        auto q = divide_exact(residual[i], ht);
        if (!q) throw InvariantError("decomposition residual not divisible by the strict transform");
        if (*q != out.Wtilde[i]) throw InvariantError("decomposition quotient differs from W~");
    }
    if (a * lie_derivative(out.Wtilde, ht) != -lie_derivative(out.Ztilde, a)) {
        throw InvariantError("identity x^alpha (W~.h~) = -Z~.x^alpha failed");
    }
    out.zstar_pole_order = out.Zstar.pole_order();
    // smooth extension to E along {h~ = 0}, where Z* agrees with Z~:
    // x_j^(beta - alpha) Z~ has no pole
    VecField weighted = out.Ztilde;
    for (std::size_t i = 0; i < 3; ++i) weighted[i] = weighted[i].shifted(c.j, c.beta - tr.alpha);
    out.weighted_pole_order = weighted.pole_order();
    return out;
}

CompatReport verify_div_compat(const Distribution& d, const Poly& h, const ChartMap& c, std::size_t n,
                               std::uint64_t seed, std::optional<Box> box) {
    if (n < 1) throw std::invalid_argument("verify_div_compat: n must be >= 1");
    const TransformResult tr = strict_transform(h, c);
    const VecField z = characteristic_field(d, h);
    const VecField zs = pullback_vecfield(z, c);
    const SurfaceField down(z, h);
    const SurfaceField up(zs, tr.strict);

    // correction terms of the weighted form x_j^(beta - alpha) / xi
    const int shift = c.identity ? 0 : c.beta - tr.alpha;
    const CompiledPoly zj(zs[c.j]);  // Z*.x_j
    const CompiledPoly z_xi2(up.z_grad2);

    if (!box) {
        box = Box{{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}};
        if (!c.identity) box->lo[c.j] = 0.1;
    }

    CompatReport rep;
    rep.n = n;
    rep.seed = seed;
    rep.chart = c.describe();
    rep.center = c.center;
    rep.j = c.j;
    rep.sign = c.sign;
    rep.alpha = tr.alpha;
    rep.beta = c.identity ? 0 : c.beta;

    const std::size_t max_draws = 200 * n;
    for (std::size_t i = 0; i < max_draws && rep.samples_used < n; ++i) {
        auto rng = substream(seed, i);
        Point p;
        for (std::size_t k = 0; k < 3; ++k) p[k] = std::uniform_real_distribution<double>(box->lo[k], box->hi[k])(rng);
        auto q = project_to_surface(up, p, 1e-14);
        if (!q || !box->contains(*q)) continue;
        if (!c.identity && (*q)[c.j] < 0.1) continue;
        const double xi2 = up.cgrad2(*q);
        if (xi2 < 1e-6) continue;
        const Point s = c.apply(*q);
        if (down.cgrad2(s) < 1e-12) continue;

        double lhs = surface_divergence(up, *q) - z_xi2(*q) / (2.0 * xi2);
        if (shift != 0) lhs += shift * zj(*q) / (*q)[c.j];
        const double rhs = down.cdiv(s) - down.cq(s);
        const double err = std::abs(lhs - rhs);
        if (err > rep.max_abs_err || rep.samples_used == 0) {
            rep.max_abs_err = std::max(rep.max_abs_err, err);
            rep.worst = *q;
        }
        ++rep.samples_used;
    }
    if (rep.samples_used == 0) throw NoSamplesError("no admissible samples on the strict transform");
    return rep;
}

}  // namespace sardkit
