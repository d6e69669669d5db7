#ifndef SARDKIT_FLOW_HPP
#define SARDKIT_FLOW_HPP

#include <functional>
#include <optional>
#include <vector>

#include "sardkit/martinet.hpp"

namespace sardkit {

struct IntegratorOpts {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_time = 1e7;
    long max_steps = 500000;
    double projection_tol = 1e-11;
    double stop_speed = 1e-8;
    double initial_step = 1e-3;
    std::optional<Box> chart_box;

    void validate() const;  // throws std::invalid_argument
};

enum class Termination { MaxTime, SpeedFloor, LeftBox, StepFailure, MaxSteps };
const char* to_string(Termination t);

struct OrbitSample {
    double t;
    Point p;
    double speed;
    double h_residual;
    double cum_length;
    double cum_div;
};

struct OrbitTrace {
    std::vector<OrbitSample> samples;
    double arc_length = 0.0;
    double div_integral = 0.0;
    Termination termination = Termination::MaxTime;
};

// div Z + (Z.|grad h|^2) / (2 |grad h|^2) - (Z.h)/h at a point of {h = 0}.
// The last term vanishes for fields with Z.h = 0 identically.
double surface_divergence(const SurfaceField& s, const Point& p, double on_surface_tol = 1e-6);
double surface_divergence(const MartinetData& md, const Point& p);

// Integrates x' = direction * Z(x) on {h = 0}, Newton-projecting after every
// accepted step. Throws OffSurfaceError if p0 is not on the surface.
OrbitTrace integrate_orbit(const SurfaceField& s, const Point& p0, const IntegratorOpts& opts, int direction);
OrbitTrace integrate_orbit(const MartinetData& md, const Point& p0, const IntegratorOpts& opts, int direction);

struct VolumeReport {
    std::vector<double> t_grid;
    std::vector<double> vol_formula;
    std::vector<double> vol_jacobian;
    std::vector<double> rel_err;
    double max_rel_err = 0.0;
};

struct Point2 {
    double x;
    double y;
};

// Planar field: components 0 and 1 of v, evaluated at z = 0.
VolumeReport liouville_check(const VecField& v, const std::vector<Point2>& s0, const std::vector<double>& t_grid,
                             double rel_tol = 1e-12, double abs_tol = 1e-14, double cell_area = 1.0);

struct ReparamReport {
    std::vector<double> t;
    std::vector<double> r;
    std::vector<Point> position;  // orbit of f*Z at t
    std::vector<double> spot_error;  // |phi^{fZ}_t(p0) - phi^Z_{r(t)}(p0)|
    double max_spot_error = 0.0;
};

// Co-integrates x' = f(x) Z(x), r' = f(x), r(0) = 0. Throws std::domain_error
// when f <= 0 is met.
ReparamReport reparametrize(const Poly& f, const VecField& z, const Point& p0, const std::vector<double>& t_out,
                            double rel_tol = 1e-12, double abs_tol = 1e-14);

// Dense-output integration of an autonomous system, sampled at `times`
// (increasing, starting at the initial time).
using State = std::vector<double>;
using Rhs = std::function<void(const State&, State&)>;
std::vector<State> integrate_at(const Rhs& rhs, State x0, const std::vector<double>& times, double rel_tol,
                                double abs_tol);

}  // namespace sardkit

#endif  // SARDKIT_FLOW_HPP
