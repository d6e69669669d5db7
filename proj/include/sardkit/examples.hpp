#ifndef SARDKIT_EXAMPLES_HPP
#define SARDKIT_EXAMPLES_HPP

#include <string>
#include <vector>

#include "sardkit/flow.hpp"
#include "sardkit/martinet.hpp"

namespace sardkit {

// heisenberg, martinet_flat, loop, conical_frame
Distribution builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Z of the loop example as printed in the literature (2y, 3x^2 + 2x(x+z), -4y^4/3).
VecField loop_printed_Z();

enum class ChainField { Printed, Derived };
const char* to_string(ChainField f);
ChainField chain_field_from_string(const std::string& s);

// printed:  (-2xy, -(3x^3 + 2y^2), 4/3 x y^4)
// derived:  -x Z for the loop example's characteristic field Z
VecField chain_field(ChainField f);

struct ChainOpts {
    ChainField field = ChainField::Printed;
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    double speed_floor = 1e-8;
    double coarse_floor = 1e-6;  // second floor for the extrapolation of z limits
    long max_steps = 2000000;
    double shoot_tol = 1e-10;
    double slack = 0.05;
    std::size_t mirror_points = 200;
};

struct HalfOrbit {
    std::vector<double> t;
    std::vector<Point> p;
    std::vector<double> len_planar;
    std::vector<double> len_3d;
    std::vector<double> cum_div;
    double z_end = 0.0;         // at the fine floor
    double z_coarse = 0.0;      // at the coarse floor
    double z_limit = 0.0;       // extrapolated
    double tail_planar = 0.0;   // straight-line estimate of the length left to the axis
};

struct ChainLink {
    double xbar = 0.0;
    double z_minus = 0.0;
    double z_plus = 0.0;
    double len_planar = 0.0;
    double len_3d = 0.0;
    bool curvature_sign_ok = false;
    bool signs_ok = false;     // x<0, y>0, x'>0, z'<0 on interior forward samples
    double mirror_error = 0.0; // forward vs mirrored backward half, (x, y) only
    HalfOrbit forward;
    HalfOrbit backward;
};

// Orbit of the chain field through (xbar, 0, -xbar), both time directions,
// until the speed drops below the floor.
ChainLink homoclinic_orbit(double xbar, const ChainOpts& opts = {});
// Backward half only; returns the extrapolated z(-inf).
double z_minus_of(double xbar, const ChainOpts& opts = {});

struct ShootResult {
    double xbar = 0.0;
    double z_minus = 0.0;
    int iterations = 0;
    bool monotone = true;  // z_minus increasing in |xbar| on every evaluated pair
};
// Throws ShootingError with both endpoint values when the bracket fails.
ShootResult shoot_for_zminus(double z0, double tol, const ChainOpts& opts = {});

struct InequalityCheck {
    std::size_t link = 0;
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

struct WindowEvidence {
    std::size_t k = 0;
    long p_k = 0;
    bool reachable = false;
    double window_sum = 0.0;
    double monotone_bound = 0.0;  // p_k z_{k+p_k}
    double divergence_bound = 0.0;     // 3/(4K) z_k^(-7/2)
    bool ok = true;
};

struct ChainReport {
    double z0 = 0.0;
    ChainField field = ChainField::Printed;
    double slack = 0.05;
    std::vector<ChainLink> links;
    std::vector<double> z_seq;
    std::vector<double> len_seq;
    double K = 0.0;
    std::vector<InequalityCheck> checks;
    std::vector<InequalityCheck> ineq_violations;
    std::vector<WindowEvidence> partial_sum_evidence;
    bool complete = false;
    std::string error;  // set when shooting failed mid-chain

    bool all_ok() const { return complete && ineq_violations.empty(); }
};

double chain_constant_K(double z0);
std::vector<InequalityCheck> link_checks(const ChainLink& l, std::size_t index, double K, double slack);

// Stops at the first shooting failure; the partial report carries `error`.
ChainReport run_chain(double z0, int n_links, const ChainOpts& opts = {});

}  // namespace sardkit

#endif  // SARDKIT_EXAMPLES_HPP
