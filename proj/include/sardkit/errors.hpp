#ifndef SARDKIT_ERRORS_HPP
#define SARDKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sardkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A certificate that must hold exactly failed (tangency, factorization, ...).
struct InvariantError : Error {
    using Error::Error;
};

struct OffSurfaceError : Error {
    using Error::Error;
};

// Near the singular locus: |grad h| too small to define a normal.
struct GradientDegenerateError : Error {
    using Error::Error;
};

struct DegenerateChartError : Error {
    using Error::Error;
};

struct NoSamplesError : Error {
    using Error::Error;
};

struct IntegrationError : Error {
    using Error::Error;
};

struct ShootingError : Error {
    using Error::Error;
};

}  // namespace sardkit

#endif  // SARDKIT_ERRORS_HPP
