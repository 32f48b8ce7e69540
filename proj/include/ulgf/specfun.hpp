#ifndef ULGF_SPECFUN_HPP
#define ULGF_SPECFUN_HPP

#include <span>
#include <vector>

#include "ulgf/common.hpp"

namespace ulgf::specfun {

/// Bessel function of the first kind J_m(x), integer order m >= 0, x > 0.
/// Orders m >= 2 go through Miller backward recurrence with sum
/// normalization; forward recurrence in m is never used (unstable for m > x).
/// Negative orders are the caller's business via J_{-m} = (-1)^m J_m.
double bessel_j(int m, double x);

/// Bessel function of the second kind Y_m(x), m >= 0, x > 0.
/// Forward recurrence from Y_0, Y_1 (stable: Y grows with m). Values that
/// exceed the double range come back as +-inf, as IEEE intends.
double bessel_y(int m, double x);

/// Outgoing Hankel function H^(1)_m(x) = J_m(x) + i Y_m(x).
cdouble hankel1(int m, double x);

/// J_0..m_max and Y_0..m_max at one argument; one Miller pass plus one
/// forward Y pass, much cheaper than m_max separate calls.
void bessel_jy_array(int m_max, double x, std::span<double> j_out, std::span<double> y_out);

struct EllipticKE {
    double k;  ///< complete elliptic integral K(m)
    double e;  ///< complete elliptic integral E(m)
};

/// Complete elliptic integrals via the arithmetic-geometric mean.
/// Parameter convention: m is the squared modulus, K(m) = int_0^{pi/2}
/// (1 - m sin^2 t)^{-1/2} dt. Requires 0 <= m < 1.
EllipticKE elliptic_ke(double m);

/// Ferrers (on-cut) Legendre functions of half-odd degree.
struct LegendrePair {
    cdouble p;  ///< P_{n-1/2}(z)
    cdouble q;  ///< Q_{n-1/2}(z)
    int n = 0;
    double z = 0.0;
};

/// P_{n-1/2}(z) and Q_{n-1/2}(z) for z in (-1, 1), Ferrers convention
/// (both real on the cut). Seeds at n = 0, 1 come from complete elliptic
/// integrals; higher degrees by the three-term recurrence run forward,
/// which is stable for both families on (-1, 1) since the two solutions
/// have comparable magnitude there. Degrees beyond 64 are outside the
/// validated range and are rejected rather than returned silently.
LegendrePair legendre_half(int n, double z);

/// Diagonal lattice Green's function G(n, n) of the 2D difference
/// Helmholtz operator at lattice-scaled wavenumber omega2 = (k h)^2,
/// evaluated in closed form through Legendre functions:
///
///   G(n,n) = (-1)^n [ s * P_{n-1/2}(z)/4 - i Q_{n-1/2}(z)/(2 pi) ],
///   z = 1 - (4 - omega2)^2 / 8,  s = -1 for omega2 < 4, +1 for omega2 > 4,
///
/// with P, Q the Ferrers functions. Equivalently this is
/// (-1)^n/(2 pi i) * Q_{n-1/2}(z -+ i0) with the cut-plane Legendre Q
/// approached from above (omega2 < 4) resp. below (omega2 > 4) the cut;
/// the branch was fixed against the limiting-absorption quadrature of the
/// defining double integral. Valid for omega2 in (0,4) u (4,8); the
/// formula degenerates at omega2 = 4 (Q blows up at z = 1) and z leaves
/// (-1,1) outside (0,8).
cdouble lgf_diagonal(int n, double omega2);

}  // namespace ulgf::specfun

#endif
