#ifndef SARDKIT_SELFTEST_HPP
#define SARDKIT_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace sardkit {

struct SelftestRow {
    std::string name;
    bool ok = false;
    std::string detail;
    double seconds = 0.0;
};

struct SelftestOpts {
    std::uint64_t seed = 0;
    std::size_t cases = 100;  // randomized cases per identity
    // Name of a built-in whose frame is perturbed before the suite runs, so
    // the failure path can be exercised. Empty for none.
    std::string corrupt;
};

// Invariant suite over every module; one row per check, in a fixed order.
std::vector<SelftestRow> run_selftest(const SelftestOpts& opts = {});

}  // namespace sardkit

#endif  // SARDKIT_SELFTEST_HPP
