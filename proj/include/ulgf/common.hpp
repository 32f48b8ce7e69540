#ifndef ULGF_COMMON_HPP
#define ULGF_COMMON_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace ulgf {

using cdouble = std::complex<double>;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

using Vec2 = Point2;

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

/// Integer lattice node (m, n) <-> physical point origin + (m h, n h).
struct LatticeIndex {
    int m = 0;
    int n = 0;
    friend bool operator==(LatticeIndex a, LatticeIndex b) { return a.m == b.m && a.n == b.n; }
    friend bool operator!=(LatticeIndex a, LatticeIndex b) { return !(a == b); }
    friend bool operator<(LatticeIndex a, LatticeIndex b) {
        return a.m != b.m ? a.m < b.m : a.n < b.n;
    }
};

struct LatticeIndexHash {
    size_t operator()(LatticeIndex p) const {
        uint64_t v = (uint64_t(uint32_t(p.m)) << 32) | uint32_t(p.n);
        v ^= v >> 33; v *= 0xff51afd7ed558ccdULL; v ^= v >> 33;
        return size_t(v);
    }
};

/// Near-resonant fast-sine-transform eigenvalue; retry with a larger box.
struct ResonanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative solve or extrapolation failed to reach its tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A lattice node sits on the boundary within tolerance; shift the grid origin.
struct DegenerateNodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent problem configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ulgf

#endif
