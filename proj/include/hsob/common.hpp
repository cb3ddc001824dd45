#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsob {

/// Points live in R^n with n <= 3; unused trailing coordinates stay zero so
/// Euclidean distances need no dimension argument.
using Point = std::array<double, 3>;

inline constexpr int kMaxDim = 3;

inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline double dist(const Point& a, const Point& b) { return norm(a - b); }

enum class ErrorKind {
    domain,          // point outside a domain / bounding box
    parameter,       // invalid exponent, radius, ...
    precondition,    // input violates a documented precondition
    unsupported,     // operation needs structure the input lacks
    degenerate,      // duplicate points, zero separation
    size,            // instance too large for an exact oracle
    construction,    // covering / chain / plan construction failed
    resolution,      // grid too coarse for the requested construction
    numerical,       // solver could not certify a result
    io,
    config,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

/// Polynomial bump (1 - |z|^2)^2 on the unit ball, zero outside.
inline double bump(double z) {
    if (z >= 1.0) return 0.0;
    const double t = 1.0 - z * z;
    return t * t;
}

/// |d/dz bump(z)| = 4 z (1 - z^2) on [0, 1).
inline double bump_slope(double z) {
    if (z >= 1.0) return 0.0;
    return 4.0 * z * (1.0 - z * z);
}

/// sup |bump'| = 8 / (3 sqrt 3), attained at z = 1/sqrt(3).
inline const double kBumpMaxSlope = 8.0 / (3.0 * std::sqrt(3.0));

}  // namespace hsob
