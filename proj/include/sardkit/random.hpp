#ifndef SARDKIT_RANDOM_HPP
#define SARDKIT_RANDOM_HPP

#include <random>

#include "sardkit/poly.hpp"

namespace sardkit {

// Random polynomial with up to max_terms terms of total degree <= max_deg and
// small rational coefficients. Used by the property tests.
inline Poly random_poly(std::mt19937_64& rng, int max_deg, int max_terms) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 3);
    Poly p;
    const int n = nterms(rng);
    for (int k = 0; k < n; ++k) {
        const int d = deg(rng);
        Exponents e{0, 0, 0};
        for (int s = 0; s < d; ++s) e[std::uniform_int_distribution<int>(0, 2)(rng)] += 1;
        p += Poly::monomial(e, Rational(num(rng), den(rng)));
    }
    return p;
}

// Seeded substream for sample i; makes sampled results independent of how
// many samples are drawn overall.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32), 0x5a7du};
    return std::mt19937_64(seq);
}

}  // namespace sardkit

#endif  // SARDKIT_RANDOM_HPP
