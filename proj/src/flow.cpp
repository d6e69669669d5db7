#include "sardkit/flow.hpp"

#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

namespace sardkit {

namespace odeint = boost::numeric::odeint;

void IntegratorOpts::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0) || !(projection_tol > 0) || !(stop_speed > 0) || !(max_time > 0) ||
        !(initial_step > 0)) {
        throw std::invalid_argument("integrator tolerances, max_time and initial_step must be positive");
    }
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::MaxTime: return "MaxTime";
        case Termination::SpeedFloor: return "SpeedFloor";
        case Termination::LeftBox: return "LeftBox";
        case Termination::StepFailure: return "StepFailure";
        case Termination::MaxSteps: return "MaxSteps";
    }
    return "?";
}

double surface_divergence(const SurfaceField& s, const Point& p, double on_surface_tol) {
    if (std::abs(s.h_at(p)) > on_surface_tol * s.scale(p)) {
        throw OffSurfaceError("surface_divergence: point is not on the surface");
    }
    const double g2 = s.cgrad2(p);
    if (!(g2 >= 1e-18)) throw GradientDegenerateError("surface_divergence: |grad h| below 1e-9");
    return s.cdiv(p) + s.cz_grad2(p) / (2.0 * g2) - s.cq(p);
}

double surface_divergence(const MartinetData& md, const Point& p) { return surface_divergence(md.surface, p); }

namespace {

using State5 = std::array<double, 5>;

struct GradientTooSmall {};

}  // namespace

OrbitTrace integrate_orbit(const SurfaceField& s, const Point& p0, const IntegratorOpts& opts, int direction) {
    opts.validate();
    if (direction != 1 && direction != -1) throw std::invalid_argument("direction must be +1 or -1");
    if (std::abs(s.h_at(p0)) > std::max(opts.projection_tol, 1e-9) * s.scale(p0)) {
        throw OffSurfaceError("integrate_orbit: initial point is not on the surface");
    }
    const double dir = direction;

    OrbitTrace tr;
    auto record = [&](double t, const Point& p, double len, double dv) {
        tr.samples.push_back({t, p, norm(s.Z_at(p)), std::abs(s.h_at(p)), len, dv});
        tr.arc_length = len;
        tr.div_integral = dv;
    };
    record(0.0, p0, 0.0, 0.0);
    if (tr.samples.back().speed < opts.stop_speed) {
        tr.termination = Termination::SpeedFloor;
        return tr;
    }
    if (opts.chart_box && !opts.chart_box->contains(p0)) {
        tr.termination = Termination::LeftBox;
        return tr;
    }

    // state: position, arc length, integral of the surface divergence
    auto rhs = [&](const State5& x, State5& dx, double) {
        const Point p{x[0], x[1], x[2]};
        const Vec3 z = s.Z_at(p);
        const double g2 = s.cgrad2(p);
        if (!(g2 >= 1e-18)) throw GradientTooSmall{};
        for (std::size_t i = 0; i < 3; ++i) dx[i] = dir * z[i];
        dx[3] = norm(z);
        dx[4] = dir * (s.cdiv(p) + s.cz_grad2(p) / (2.0 * g2) - s.cq(p));
    };

    auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State5>());
    State5 x{p0[0], p0[1], p0[2], 0.0, 0.0};
    double t = 0.0;
    double dt = opts.initial_step;
    long steps = 0;
    for (;;) {
        if (t >= opts.max_time) {
            tr.termination = Termination::MaxTime;
            break;
        }
        if (steps >= opts.max_steps) {
            tr.termination = Termination::MaxSteps;
            break;
        }
        dt = std::min(dt, opts.max_time - t);
        odeint::controlled_step_result res;
        try {
            res = stepper.try_step(rhs, x, t, dt);
        } catch (const GradientTooSmall&) {
            // reached the singular locus, where Z vanishes as well
            tr.termination = Termination::SpeedFloor;
            break;
        }
        if (res == odeint::fail) {
            if (dt < 1e-14 * std::max(1.0, std::abs(t))) {
                tr.termination = Termination::StepFailure;
                break;
            }
            continue;
        }
        ++steps;
        auto proj = project_to_surface(s, {x[0], x[1], x[2]}, opts.projection_tol, 5);
        if (!proj) throw IntegrationError("projection onto the surface diverged at t = " + std::to_string(t));
        x[0] = (*proj)[0];
        x[1] = (*proj)[1];
        x[2] = (*proj)[2];
        stepper.reset();
        record(t, *proj, x[3], x[4]);
        if (tr.samples.back().speed < opts.stop_speed) {
            tr.termination = Termination::SpeedFloor;
            break;
        }
        if (opts.chart_box && !opts.chart_box->contains(*proj)) {
            tr.termination = Termination::LeftBox;
            break;
        }
    }
    return tr;
}

OrbitTrace integrate_orbit(const MartinetData& md, const Point& p0, const IntegratorOpts& opts, int direction) {
    return integrate_orbit(md.surface, p0, opts, direction);
}

std::vector<State> integrate_at(const Rhs& rhs, State x0, const std::vector<double>& times, double rel_tol,
                                double abs_tol) {
    std::vector<State> out;
    if (times.empty()) return out;
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) throw std::invalid_argument("integrate_at: times must be increasing");
    }
    auto sys = [&](const State& x, State& dx, double) {
        dx.resize(x.size());
        rhs(x, dx);
    };
    const double span = times.back() - times.front();
    const double dt0 = span > 0 ? std::min(1e-3, span / 100) : 1e-3;
    odeint::integrate_times(odeint::make_dense_output(abs_tol, rel_tol, odeint::runge_kutta_dopri5<State>()), sys, x0,
                            times.begin(), times.end(), dt0,
                            [&](const State& x, double) { out.push_back(x); });
    return out;
}

VolumeReport liouville_check(const VecField& v, const std::vector<Point2>& s0, const std::vector<double>& t_grid,
                             double rel_tol, double abs_tol, double cell_area) {
    if (s0.empty()) throw std::invalid_argument("liouville_check: empty initial set");
    for (std::size_t a = 0; a < s0.size(); ++a) {
        for (std::size_t b = a + 1; b < s0.size(); ++b) {
            if (s0[a].x == s0[b].x && s0[a].y == s0[b].y) throw std::invalid_argument("liouville_check: repeated point");
        }
    }
    if (t_grid.empty()) throw std::invalid_argument("liouville_check: empty time grid");
    const CompiledPoly v1(v[0]);
    const CompiledPoly v2(v[1]);
    const CompiledPoly d11(diff(v[0], 0)), d12(diff(v[0], 1)), d21(diff(v[1], 0)), d22(diff(v[1], 1));

    std::vector<double> times{0.0};
    for (double t : t_grid) {
        if (t < 0) throw std::invalid_argument("liouville_check: negative time");
        if (t > times.back()) times.push_back(t);
    }

    // state: x, y, int div, J (row major)
    const Rhs rhs = [&](const State& s, State& ds) {
        const Point p{s[0], s[1], 0.0};
        const double a = d11(p), b = d12(p), c = d21(p), d = d22(p);
        if (!std::isfinite(s[0]) || std::abs(s[0]) + std::abs(s[1]) > 1e8) {
            throw IntegrationError("liouville_check: orbit escaped");
        }
        ds[0] = v1(p);
        ds[1] = v2(p);
        ds[2] = a + d;
        ds[3] = a * s[3] + b * s[5];
        ds[4] = a * s[4] + b * s[6];
        ds[5] = c * s[3] + d * s[5];
        ds[6] = c * s[4] + d * s[6];
    };

    std::vector<double> sum_formula(times.size(), 0.0);
    std::vector<double> sum_jac(times.size(), 0.0);
    for (const auto& q : s0) {
        const auto states = integrate_at(rhs, {q.x, q.y, 0.0, 1.0, 0.0, 0.0, 1.0}, times, rel_tol, abs_tol);
        if (states.size() != times.size()) throw IntegrationError("liouville_check: integration stopped early");
        for (std::size_t k = 0; k < times.size(); ++k) {
            const State& s = states[k];
            sum_formula[k] += std::exp(s[2]);
            sum_jac[k] += s[3] * s[6] - s[4] * s[5];
        }
    }

    VolumeReport rep;
    const double w = cell_area / static_cast<double>(s0.size());
    for (double t : t_grid) {
        std::size_t k = 0;
        while (times[k] != t) ++k;
        rep.t_grid.push_back(t);
        rep.vol_formula.push_back(w * sum_formula[k]);
        rep.vol_jacobian.push_back(w * sum_jac[k]);
        const double e = std::abs(rep.vol_formula.back() - rep.vol_jacobian.back()) / std::abs(rep.vol_jacobian.back());
        rep.rel_err.push_back(e);
        rep.max_rel_err = std::max(rep.max_rel_err, e);
    }
    return rep;
}

ReparamReport reparametrize(const Poly& f, const VecField& z, const Point& p0, const std::vector<double>& t_out,
                            double rel_tol, double abs_tol) {
    const CompiledPoly cf(f);
    const CompiledField cz(z);
    std::vector<double> times{0.0};
    for (double t : t_out) {
        if (t <= times.back()) throw std::invalid_argument("reparametrize: output times must be positive and increasing");
        times.push_back(t);
    }

    const Rhs rhs = [&](const State& s, State& ds) {
        const Point p{s[0], s[1], s[2]};
        const double fv = cf(p);
        if (!(fv > 0)) throw std::domain_error("reparametrize: f <= 0 along the orbit");
        const Vec3 zv = cz(p);
        for (std::size_t i = 0; i < 3; ++i) ds[i] = fv * zv[i];
        ds[3] = fv;
    };
    const auto states = integrate_at(rhs, {p0[0], p0[1], p0[2], 0.0}, times, rel_tol, abs_tol);

    ReparamReport rep;
    const Rhs zrhs = [&](const State& s, State& ds) {
        const Vec3 zv = cz({s[0], s[1], s[2]});
        for (std::size_t i = 0; i < 3; ++i) ds[i] = zv[i];
    };
    for (std::size_t k = 1; k < states.size(); ++k) {
        const State& s = states[k];
        rep.t.push_back(times[k]);
        rep.r.push_back(s[3]);
        rep.position.push_back({s[0], s[1], s[2]});
        // spot re-integration of Z for time r(t)
        const auto back = integrate_at(zrhs, {p0[0], p0[1], p0[2]}, {0.0, s[3]}, rel_tol, abs_tol);
        const Vec3 d{back.back()[0] - s[0], back.back()[1] - s[1], back.back()[2] - s[2]};
        rep.spot_error.push_back(norm(d));
        rep.max_spot_error = std::max(rep.max_spot_error, rep.spot_error.back());
    }
    return rep;
}

}  // namespace sardkit
