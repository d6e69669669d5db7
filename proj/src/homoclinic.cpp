#include <algorithm>
#include <cmath>
#include <map>

#include <boost/numeric/odeint.hpp>

#include "sardkit/examples.hpp"

namespace sardkit {

namespace odeint = boost::numeric::odeint;

namespace {

using State6 = std::array<double, 6>;

struct ChainSystem {
    CompiledField f;
    CompiledPoly div;
    explicit ChainSystem(const VecField& v) : f(v), div(divergence_euclidean(v)) {}
};

// state: x, y, z, planar length, 3d length, integral of div
HalfOrbit integrate_half(const ChainSystem& sys, const Point& p0, double dir, const ChainOpts& opts) {
    auto rhs = [&](const State6& s, State6& ds, double) {
        const Point p{s[0], s[1], s[2]};
        const Vec3 v = sys.f(p);
        for (std::size_t i = 0; i < 3; ++i) ds[i] = dir * v[i];
        ds[3] = std::hypot(v[0], v[1]);
        ds[4] = norm(v);
        ds[5] = dir * sys.div(p);
    };
    auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State6>());
    State6 s{p0[0], p0[1], p0[2], 0, 0, 0};
    HalfOrbit h;
    auto record = [&](double t) {
        h.t.push_back(t);
        h.p.push_back({s[0], s[1], s[2]});
        h.len_planar.push_back(s[3]);
        h.len_3d.push_back(s[4]);
        h.cum_div.push_back(s[5]);
    };
    double t = 0;
    double dt = 1e-3;
    record(t);
    bool coarse_seen = false;
    double speed_coarse = 0;
    long steps = 0;
    for (;;) {
        const double speed = norm(sys.f({s[0], s[1], s[2]}));
        if (!coarse_seen && speed < opts.coarse_floor) {
            coarse_seen = true;
            h.z_coarse = s[2];
            speed_coarse = speed;
        }
        if (speed < opts.speed_floor) {
            h.z_end = s[2];
            if (coarse_seen && speed_coarse > speed) {
                // z approaches its limit at a rate linear in the speed floor
                h.z_limit = h.z_end - (h.z_coarse - h.z_end) * speed / (speed_coarse - speed);
            } else {
                h.z_limit = h.z_end;
            }
            h.tail_planar = std::hypot(s[0], s[1]);
            return h;
        }
        if (steps++ >= opts.max_steps) throw IntegrationError("orbit did not reach the axis within max_steps");
        if (odeint::fail == stepper.try_step(rhs, s, t, dt)) {
            if (dt < 1e-14 * std::max(1.0, t)) throw IntegrationError("step size underflow");
            continue;
        }
        if (!std::isfinite(s[0]) || std::abs(s[0]) + std::abs(s[1]) + std::abs(s[2]) > 1e6) {
            throw IntegrationError("orbit escaped");
        }
        record(t);
    }
}

void check_xbar(double xbar) {
    if (!(xbar < 0) || xbar < -1) throw std::invalid_argument("xbar must lie in [-1, 0)");
}

}  // namespace

ChainLink homoclinic_orbit(double xbar, const ChainOpts& opts) {
    check_xbar(xbar);
    const VecField field = chain_field(opts.field);
    const ChainSystem sys(field);
    const Point p0{xbar, 0.0, -xbar};

    ChainLink l;
    l.xbar = xbar;
    l.forward = integrate_half(sys, p0, 1.0, opts);
    l.backward = integrate_half(sys, p0, -1.0, opts);
    l.z_plus = l.forward.z_limit;
    l.z_minus = l.backward.z_limit;
    l.len_planar = l.forward.len_planar.back() + l.backward.len_planar.back() + l.forward.tail_planar +
                   l.backward.tail_planar;
    l.len_3d = l.forward.len_3d.back() + l.backward.len_3d.back() + l.forward.tail_planar + l.backward.tail_planar;

    // 18x^7 - 24x^4y^2 along both halves
    int sign = 0;
    l.curvature_sign_ok = true;
    for (const auto* half : {&l.forward, &l.backward}) {
        for (const auto& p : half->p) {
            const double c = 18 * std::pow(p[0], 7) - 24 * std::pow(p[0], 4) * p[1] * p[1];
            const int sg = (c > 0) - (c < 0);
            if (sg == 0) continue;
            if (sign == 0) sign = sg;
            if (sg != sign) l.curvature_sign_ok = false;
        }
    }

    l.signs_ok = true;
    for (std::size_t k = 1; k + 1 < l.forward.p.size(); ++k) {
        const Point& p = l.forward.p[k];
        const Vec3 v = sys.f(p);
        if (!(p[0] < 0 && p[1] > 0 && v[0] > 0 && v[2] < 0)) l.signs_ok = false;
    }

    // mirror check on a common geometric time grid
    const double t_max = 0.5 * std::min(l.forward.t.back(), l.backward.t.back());
    if (t_max > 1e-3 && opts.mirror_points >= 2) {
        std::vector<double> times{0.0};
        const double r = std::pow(t_max / 1e-3, 1.0 / static_cast<double>(opts.mirror_points - 1));
        for (double t = 1e-3; times.size() <= opts.mirror_points; t *= r) times.push_back(t);
        auto fwd = [&](const State& s, State& ds) {
            const Vec3 v = sys.f({s[0], s[1], s[2]});
            for (std::size_t i = 0; i < 3; ++i) ds[i] = v[i];
        };
        auto bwd = [&](const State& s, State& ds) {
            const Vec3 v = sys.f({s[0], s[1], s[2]});
            for (std::size_t i = 0; i < 3; ++i) ds[i] = -v[i];
        };
        const State x0{p0[0], p0[1], p0[2]};
        const auto a = integrate_at(fwd, x0, times, opts.rel_tol, opts.abs_tol);
        const auto b = integrate_at(bwd, x0, times, opts.rel_tol, opts.abs_tol);
        for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
            l.mirror_error = std::max({l.mirror_error, std::abs(a[k][0] - b[k][0]), std::abs(a[k][1] + b[k][1])});
        }
    }
    return l;
}

double z_minus_of(double xbar, const ChainOpts& opts) {
    check_xbar(xbar);
    const ChainSystem sys(chain_field(opts.field));
    return integrate_half(sys, {xbar, 0.0, -xbar}, -1.0, opts).z_limit;
}

ShootResult shoot_for_zminus(double z0, double tol, const ChainOpts& opts) {
    if (!(z0 > 0) || z0 > 1) throw std::invalid_argument("shoot_for_zminus: z0 must lie in (0, 1]");
    if (!(tol > 0)) throw std::invalid_argument("shoot_for_zminus: tol must be positive");
    std::map<double, double> seen;  // xbar -> z_minus
    auto eval = [&](double xb) {
        const double z = z_minus_of(xb, opts);
        seen[xb] = z;
        return z - z0;
    };
    double a = -z0;
    double b = -0.01 * z0;
    double fa = eval(a);
    double fb = eval(b);
    if (fa * fb > 0) {
        throw ShootingError("bracket failure: z_minus(" + std::to_string(a) + ") - z0 = " + std::to_string(fa) +
                            ", z_minus(" + std::to_string(b) + ") - z0 = " + std::to_string(fb));
    }
    ShootResult res;
    auto finish = [&](double xb, double f) {
        res.xbar = xb;
        res.z_minus = f + z0;
        // z_minus must decrease as xbar increases towards 0
        double prev = INFINITY;
        for (const auto& [x, z] : seen) {
            if (z > prev) res.monotone = false;
            prev = z;
        }
        return res;
    };
    if (std::abs(fa - fb) <= tol) {
        const double m = 0.5 * (a + b);
        res.iterations = 1;
        return finish(m, eval(m));
    }
    for (int it = 1; it <= 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = eval(m);
        res.iterations = it;
        if (std::abs(fm) <= tol || (b - a) < 1e-15) return finish(m, fm);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    throw ShootingError("bisection did not converge");
}

double chain_constant_K(double z0) {
    const double a = std::abs(z0);
    return std::max(0.5 + std::pow(a, 4.5) / 3.0, 2.0 * std::sqrt(2.0) + (4.0 / 3.0) * std::pow(a, 4.5));
}

namespace {

InequalityCheck le(std::size_t link, std::string name, double a, double b, double slack) {
    return {link, std::move(name), a, b, a <= b + slack * std::max(std::abs(a), std::abs(b))};
}

}  // namespace

std::vector<InequalityCheck> link_checks(const ChainLink& l, std::size_t i, double K, double slack) {
    const double zm = std::abs(l.z_minus);
    const double zp = std::abs(l.z_plus);
    const double ax = std::abs(l.xbar);
    std::vector<InequalityCheck> c;
    c.push_back({i, "z_plus < z_minus", l.z_plus, l.z_minus, l.z_plus < l.z_minus});
    c.push_back(le(i, "z gap lower bound", -(2.0 / 3.0) * std::pow(zm, 4.5) * l.len_planar, l.z_plus - l.z_minus, slack));
    c.push_back(le(i, "z gap upper bound", l.z_plus - l.z_minus, -std::pow(zp, 5.5) / 35.0, slack));
    c.push_back(le(i, "z over planar length", zm, l.len_planar * (0.5 + std::pow(zm, 4.5) / 3.0), slack));
    c.push_back(le(i, "planar length <= 3d length", l.len_planar, l.len_3d, slack));
    c.push_back(le(i, "3d length bound", l.len_3d,
                   2.0 * (zm + 2.0 * std::pow(zm, 1.5)) * (std::sqrt(2.0) + (2.0 / 3.0) * std::pow(zm, 4.5)), slack));
    c.push_back(le(i, "z <= K len", zm, K * l.len_3d, slack));
    c.push_back(le(i, "len <= K(z + 2z^1.5)", l.len_3d, K * (zm + 2.0 * std::pow(zm, 1.5)), slack));
    c.push_back(le(i, "sandwich lower", 2.0 * ax, l.len_planar, slack));
    c.push_back(le(i, "sandwich upper", l.len_planar, 2.0 * ax + 4.0 * std::pow(ax, 1.5), slack));
    return c;
}

ChainReport run_chain(double z0, int n_links, const ChainOpts& opts) {
    if (!(z0 > 0) || z0 > 1) throw std::invalid_argument("run_chain: z0 must lie in (0, 1]");
    if (n_links < 1) throw std::invalid_argument("run_chain: n_links must be >= 1");
    ChainReport rep;
    rep.z0 = z0;
    rep.field = opts.field;
    rep.slack = opts.slack;
    rep.K = chain_constant_K(z0);
    rep.z_seq.push_back(z0);
    double z = z0;
    try {
        for (int k = 0; k < n_links; ++k) {
            const ShootResult s = shoot_for_zminus(z, opts.shoot_tol, opts);
            ChainLink l = homoclinic_orbit(s.xbar, opts);
            z = l.z_plus;
            rep.len_seq.push_back(l.len_3d);
            rep.z_seq.push_back(z);
            rep.links.push_back(std::move(l));
            if (!(z > 0)) throw ShootingError("chain left z > 0");
        }
        rep.complete = true;
    } catch (const Error& e) {
        rep.error = e.what();
    }

    for (std::size_t k = 0; k < rep.links.size(); ++k) {
        auto c = link_checks(rep.links[k], k, rep.K, opts.slack);
        rep.checks.insert(rep.checks.end(), c.begin(), c.end());
    }
    for (std::size_t k = 1; k < rep.z_seq.size(); ++k) {
        rep.checks.push_back({k, "z_seq decreasing and positive", rep.z_seq[k], rep.z_seq[k - 1],
                              rep.z_seq[k] < rep.z_seq[k - 1] && rep.z_seq[k] > 0});
    }
    for (const auto& c : rep.checks) {
        if (!c.ok) rep.ineq_violations.push_back(c);
    }

    for (std::size_t k = 0; k < rep.z_seq.size(); ++k) {
        WindowEvidence w;
        w.k = k;
        const double zk = rep.z_seq[k];
        w.p_k = static_cast<long>(std::ceil(3.0 / (4.0 * rep.K * std::pow(zk, 4.5))));
        w.divergence_bound = 3.0 / (4.0 * rep.K) * std::pow(zk, -3.5);
        const std::size_t last = k + static_cast<std::size_t>(w.p_k);
        w.reachable = last < rep.z_seq.size();
        if (w.reachable) {
            for (std::size_t j = k; j <= last; ++j) w.window_sum += rep.z_seq[j];
            w.monotone_bound = static_cast<double>(w.p_k) * rep.z_seq[last];
            w.ok = w.window_sum >= w.monotone_bound;
            if (!w.ok) rep.ineq_violations.push_back({k, "window sum >= p_k z_{k+p_k}", w.window_sum, w.monotone_bound, false});
        }
        rep.partial_sum_evidence.push_back(w);
    }
    return rep;
}

}  // namespace sardkit
