#ifndef SARDKIT_BLOWUP_HPP
#define SARDKIT_BLOWUP_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "sardkit/martinet.hpp"

namespace sardkit {

// Directional chart of the blow-up along the coordinate center {x_i = 0, i in
// center}: u_i = x_i x_j (i in center, i != j), u_j = sign x_j, other
// coordinates unchanged. Indices are 0-based. The exceptional divisor is
// {x_j = 0} and the chart is used on x_j >= 0.
struct ChartMap {
    std::vector<std::size_t> center;
    std::size_t j = 0;
    int sign = 1;
    std::array<Poly, 3> images;
    int beta = 0;
    std::optional<int> alpha;
    bool identity = false;

    Point apply(const Point& x) const;
    std::string describe() const;  // 1-based, e.g. "center {1,2,3}, j=3, +"
};

// Throws DegenerateChartError on an invalid center/direction/sign.
ChartMap chart_map(std::vector<std::size_t> center, std::size_t j, int sign);
// No blow-up: alpha = beta = 0, pullbacks are the identity.
ChartMap identity_chart();

Poly total_transform(const Poly& f, const ChartMap& c);

struct TransformResult {
    Poly total;
    int alpha = 0;
    Poly strict;
    std::optional<Poly> weighted;  // total / x_j, when alpha >= 1
};

// Also records alpha in c.
TransformResult strict_transform(const Poly& f, ChartMap& c);
TransformResult strict_transform(const Poly& f, const ChartMap& c);

PolyMatrix chart_jacobian(const ChartMap& c);

// d(sigma)^{-1} (V o sigma), Laurent in x_j.
VecField pullback_vecfield(const VecField& v, const ChartMap& c);
// d(sigma)_x W(x), the field pushed back down, evaluated at chart point x.
Vec3 pushforward_at(const VecField& w, const ChartMap& c, const Point& x);

struct VolumeFactor {
    int beta = 0;
    Poly jacobian_monomial;  // det d(sigma) = sign * x_j^beta
};
VolumeFactor volume_factor(const ChartMap& c);

struct TransformedCharacteristic {
    VecField Zstar;   // pullback of Z
    VecField Ztilde;  // x_j^alpha [(X*.h~) Y* - (Y*.h~) X*]
    VecField Wtilde;  // (X*.x_j^alpha) Y* - (Y*.x_j^alpha) X*
    Poly h_tilde;
    int alpha = 0;
    int beta = 0;
    int zstar_pole_order = 0;
    int weighted_pole_order = 0;  // of x_j^(beta - alpha) Z~ (= Z* on {h~ = 0})
};

// Certifies Z* - Z~ = h~ W~ and x_j^alpha (W~.h~) = -Z~.(x_j^alpha) exactly;
// throws InvariantError otherwise, DegenerateChartError when alpha = 0.
TransformedCharacteristic transformed_characteristic(const Distribution& d, const Poly& h, const ChartMap& c);

struct CompatReport {
    double max_abs_err = 0.0;
    std::size_t n = 0;
    std::size_t samples_used = 0;
    std::uint64_t seed = 0;
    std::string chart;
    std::vector<std::size_t> center;
    std::size_t j = 0;
    int sign = 1;
    int alpha = 0;
    int beta = 0;
    Point worst{0, 0, 0};
};

// Compares the divergence of Z* for the weighted surface form
// x_j^(beta - alpha) |grad h~|^-1 dA on {h~ = 0} with div Z at sigma(p).
// Samples n points in `box` (default: |x_i| <= 1.5, 0.1 <= x_j <= 1.5).
CompatReport verify_div_compat(const Distribution& d, const Poly& h, const ChartMap& c, std::size_t n,
                               std::uint64_t seed, std::optional<Box> box = std::nullopt);

}  // namespace sardkit

#endif  // SARDKIT_BLOWUP_HPP
