#include "sardkit/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "sardkit/blowup.hpp"
#include "sardkit/examples.hpp"
#include "sardkit/flow.hpp"
#include "sardkit/random.hpp"

namespace sardkit {

namespace {

VecField rfield(std::mt19937_64& rng, int deg) {
    return VecField(random_poly(rng, deg, 3), random_poly(rng, deg, 3), random_poly(rng, deg, 3));
}

// Returns "" on success, otherwise a description of the first failure.
using Check = std::function<std::string()>;

std::string count_fail(std::size_t bad, std::size_t total) {
    if (bad == 0) return "";
    return std::to_string(bad) + " of " + std::to_string(total) + " cases failed";
}

}  // namespace

std::vector<SelftestRow> run_selftest(const SelftestOpts& opts) {
    std::map<std::string, Distribution> data;
    for (const auto& n : builtin_names()) data[n] = builtin(n);
    if (!opts.corrupt.empty()) {
        auto it = data.find(opts.corrupt);
        if (it == data.end()) throw std::invalid_argument("selftest: unknown fixture '" + opts.corrupt + "'");
        it->second.Y[2] += parse("x^2*y");
    }
    const std::size_t n = opts.cases;
    const std::uint64_t seed = opts.seed;

    std::vector<std::pair<std::string, Check>> checks;

    checks.emplace_back("poly ring axioms", [&] {
        std::mt19937_64 rng(seed);
        std::size_t bad = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const Poly a = random_poly(rng, 4, 5), b = random_poly(rng, 4, 5), c = random_poly(rng, 4, 5);
            const bool ok = (a + b) + c == a + (b + c) && a * b == b * a && (a * b) * c == a * (b * c) &&
                            a * (b + c) == a * b + a * c && (a - a).is_zero() && parse(a.to_string()) == a;
            bad += !ok;
        }
        return count_fail(bad, n);
    });
    checks.emplace_back("gcd and squarefree", [&] {
        std::mt19937_64 rng(seed + 1);
        std::size_t bad = 0;
        const std::size_t m = std::max<std::size_t>(1, n / 4);
        for (std::size_t k = 0; k < m; ++k) {
            const Poly p = random_poly(rng, 2, 3), q = random_poly(rng, 2, 3), r = random_poly(rng, 2, 3);
            if (p.is_zero() || q.is_zero() || r.is_zero()) continue;
            const Poly g = gcd(p * q, p * r);
            const Poly s = squarefree_part(p * p * q);
            bad += !divide_exact(g, normalize_primitive(p)) || !divide_exact(p * q, s);
        }
        return count_fail(bad, m);
    });
    checks.emplace_back("jacobi identity", [&] {
        std::mt19937_64 rng(seed + 2);
        std::size_t bad = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const VecField u = rfield(rng, 2), v = rfield(rng, 2), w = rfield(rng, 2);
            bad += !(lie_bracket(u, lie_bracket(v, w)) + lie_bracket(v, lie_bracket(w, u)) +
                     lie_bracket(w, lie_bracket(u, v)))
                        .is_zero();
        }
        return count_fail(bad, n);
    });
    checks.emplace_back("leibniz rules", [&] {
        std::mt19937_64 rng(seed + 3);
        std::size_t bad = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const VecField v = rfield(rng, 2), w = rfield(rng, 2);
            const Poly f = random_poly(rng, 3, 4), g = random_poly(rng, 3, 4);
            bad += lie_derivative(v, f * g) != f * lie_derivative(v, g) + g * lie_derivative(v, f) ||
                   lie_bracket(v, f * w) != lie_derivative(v, f) * w + f * lie_bracket(v, w);
        }
        return count_fail(bad, n);
    });
    checks.emplace_back("divergence identities", [&] {
        std::mt19937_64 rng(seed + 4);
        std::uniform_real_distribution<double> u(0.2, 1.2);
        std::size_t bad = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const VecField v = rfield(rng, 2), w = rfield(rng, 2);
            const Poly b = random_poly(rng, 2, 3);
            const Exponents e{static_cast<int>(rng() % 3), static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)};
            const Poly a = Poly::monomial(e, 2);
            const Point p{u(rng), u(rng), u(rng)};
            const double lhs = divergence_euclidean(a * v).eval(p) / a.eval(p);
            const double rhs = divergence_euclidean(v).eval(p) + lie_derivative(v, a).eval(p) / a.eval(p);
            bad += std::abs(lhs - rhs) > 1e-10 * (1 + std::abs(rhs)) ||
                   divergence_euclidean(b * v) != b * divergence_euclidean(v) + lie_derivative(v, b) ||
                   divergence_euclidean(lie_bracket(v, w)) !=
                       lie_derivative(v, divergence_euclidean(w)) - lie_derivative(w, divergence_euclidean(v));
        }
        return count_fail(bad, n);
    });
    checks.emplace_back("loop bracket", [&] {
        const Distribution& d = data.at("loop");
        const VecField b = lie_bracket(d.X, d.Y);
        return b == VecField(0, 0, parse("y^2 - x^2*(x+z)")) ? "" : "[X,Y] = " + b.to_string();
    });
    checks.emplace_back("martinet functions", [&] {
        const std::map<std::string, std::string> want{{"heisenberg", "1"},
                                                      {"martinet_flat", "x"},
                                                      {"loop", "y^2 - x^2*(x+z)"},
                                                      {"conical_frame", "z^2 - x^2 - y^2"}};
        std::string out;
        for (const auto& [name, h] : want) {
            const Poly got = reduced_martinet(martinet_function(data.at(name)));
            if (got != parse(h) && got != -parse(h)) out += name + ": h = " + got.to_string() + "; ";
        }
        return out;
    });
    checks.emplace_back("tangency certificates", [&] {
        std::string out;
        for (const auto& [name, d] : data) {
            const Poly h = reduced_martinet(martinet_function(d));
            const VecField z = lie_derivative(d.X, h) * d.Y - lie_derivative(d.Y, h) * d.X;
            if (!divide_exact(lie_derivative(z, h), h)) out += name + " ";
        }
        return out;
    });
    checks.emplace_back("conical blow-up", [&] {
        const Poly h = reduced_martinet(martinet_function(data.at("conical_frame")));
        ChartMap c = chart_map({0, 1, 2}, 2, 1);
        const TransformResult r = strict_transform(h, c);
        const VolumeFactor v = volume_factor(c);
        std::ostringstream os;
        if (r.total != parse("z^2*(1 - x^2 - y^2)") && r.total != parse("-z^2*(1 - x^2 - y^2)")) {
            os << "total = " << r.total << "; ";
        }
        if (r.alpha != 2 || v.beta != 2) os << "alpha = " << r.alpha << ", beta = " << v.beta;
        return os.str();
    });
    checks.emplace_back("transformed characteristic", [&] {
        for (const auto& [name, c] : {std::pair{"conical_frame", chart_map({0, 1, 2}, 2, 1)},
                                      std::pair{"loop", chart_map({0, 1}, 0, 1)}}) {
            const Distribution& d = data.at(name);
            transformed_characteristic(d, reduced_martinet(martinet_function(d)), c);
        }
        return std::string();
    });
    checks.emplace_back("divergence compatibility", [&] {
        std::ostringstream os;
        for (const auto& [name, c] : {std::pair{"conical_frame", chart_map({0, 1, 2}, 2, 1)},
                                      std::pair{"loop", chart_map({0, 1}, 0, 1)}}) {
            const Distribution& d = data.at(name);
            const CompatReport r = verify_div_compat(d, reduced_martinet(martinet_function(d)), c, 200, seed);
            if (!(r.max_abs_err <= 1e-6)) os << name << ": max error " << r.max_abs_err << "; ";
        }
        return os.str();
    });
    checks.emplace_back("pullback round trip", [&] {
        std::mt19937_64 rng(seed + 5);
        std::uniform_real_distribution<double> u(-1.5, 1.5), pos(0.1, 1.5);
        const ChartMap charts[] = {chart_map({0, 1, 2}, 2, 1), chart_map({0, 1}, 0, -1)};
        std::size_t bad = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const ChartMap& c = charts[k % 2];
            const VecField v = rfield(rng, 3);
            const VecField pb = pullback_vecfield(v, c);
            Point x{u(rng), u(rng), u(rng)};
            x[c.j] = pos(rng);
            const Vec3 back = pushforward_at(pb, c, x);
            const Vec3 want = eval(v, c.apply(x));
            for (std::size_t i = 0; i < 3; ++i) bad += std::abs(back[i] - want[i]) > 1e-10 * (1 + std::abs(want[i]));
            if (k % 4 == 0) {
                const VecField w = rfield(rng, 2);
                bad += pullback_vecfield(lie_bracket(v, w), c) !=
                       lie_bracket(pb, pullback_vecfield(w, c));
            }
        }
        return count_fail(bad, n);
    });
    checks.emplace_back("liouville transport", [&] {
        const std::vector<Point2> s0{{0.3, 0.1}, {-0.2, 0.5}, {1.0, -1.0}};
        const VolumeReport r = liouville_check(VecField::parse({"x", "y", "0"}), s0, {0.5, 1.0});
        std::ostringstream os;
        for (std::size_t k = 0; k < r.t_grid.size(); ++k) {
            if (std::abs(r.vol_jacobian[k] / std::exp(2 * r.t_grid[k]) - 1) > 1e-8) os << "t = " << r.t_grid[k] << " ";
        }
        if (r.max_rel_err > 1e-8) os << "estimators differ by " << r.max_rel_err;
        return os.str();
    });
    checks.emplace_back("reparametrization", [&] {
        const Distribution& d = data.at("loop");
        const MartinetData md = analyze(d);
        const ReparamReport r = reparametrize(Poly(2), md.Z, {-0.3, 0, 0.3}, {0.5, 1.0});
        std::ostringstream os;
        if (std::abs(r.r[1] - 2.0) > 1e-9) os << "r(1) = " << r.r[1] << "; ";
        if (r.max_spot_error > 1e-6) os << "spot error " << r.max_spot_error;
        return os.str();
    });
    checks.emplace_back("homoclinic link", [&] {
        const ChainLink l = homoclinic_orbit(-0.3);
        std::ostringstream os;
        if (!(l.z_plus < l.z_minus)) os << "z_plus >= z_minus; ";
        if (!l.signs_ok) os << "sign pattern; ";
        if (!l.curvature_sign_ok) os << "curvature sign; ";
        if (!(l.mirror_error <= 1e-5)) os << "mirror error " << l.mirror_error;
        return os.str();
    });
    checks.emplace_back("scan determinism", [&] {
        const MartinetData md = analyze(data.at("loop"));
        const Box box{{-1, -1, 0.1}, {-0.1, 1, 1}};
        const ScanReport a = divergence_ratio_scan(md, box, 40, seed);
        const ScanReport b = divergence_ratio_scan(md, box, 40, seed);
        return a.sup_ratio == b.sup_ratio && a.argmax == b.argmax ? "" : "scan differs between runs";
    });

    std::vector<SelftestRow> rows;
    for (const auto& [name, fn] : checks) {
        SelftestRow row{name, false, "", 0.0};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            row.detail = fn();
            row.ok = row.detail.empty();
        } catch (const std::exception& e) {
            row.detail = e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace sardkit
