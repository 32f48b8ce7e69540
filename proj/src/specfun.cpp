#include "ulgf/specfun.hpp"

#include <cmath>
#include <limits>

namespace ulgf::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kPi = 3.14159265358979323846264338327950288;

// Ascending series for J_0, J_1, Y_0, Y_1, accumulated in long double.
// Alternating terms peak near j ~ x/2; at the x < 20 switch point the
// cancellation costs ~7 digits, which extended precision absorbs.
void jy01_series(double x, double& j0, double& j1, double& y0, double& y1) {
    const long double q = 0.25L * (long double)x * (long double)x;  // (x/2)^2
    long double t0 = 1.0L, s0 = 1.0L;
    long double t1 = 1.0L, s1 = 1.0L;
    long double h = 0.0L;                 // harmonic number H_j
    long double sy0 = 0.0L;               // sum H_j (-q)^j / (j!)^2
    long double sy1 = 0.0L;               // sum (H_j + H_{j+1}) (-q)^j / (j!(j+1)!)
    long double ty1 = 1.0L;               // (-q)^j / (j!(j+1)!)
    sy1 = 1.0L;                           // j = 0 term: H_0 + H_1 = 1 times 1
    for (int j = 1; j < 200; ++j) {
        t0 *= -q / ((long double)j * j);
        s0 += t0;
        t1 *= -q / ((long double)j * (j + 1));
        s1 += t1;
        h += 1.0L / j;
        sy0 += h * t0;
        ty1 *= -q / ((long double)j * (j + 1));
        sy1 += (2.0L * h + 1.0L / (j + 1)) * ty1;
        if (fabsl(t0) < 1e-24L * fabsl(s0) && fabsl(t1) < 1e-24L * fabsl(s1)) break;
    }
    const long double xl = x;
    const long double lg = logl(0.5L * xl) + kEulerGamma;
    const long double j0l = s0;
    const long double j1l = 0.5L * xl * s1;
    j0 = (double)j0l;
    j1 = (double)j1l;
    y0 = (double)((2.0L / kPi) * (lg * j0l + sy0));
    // digamma terms of the n = 1 series folded into H_j + H_{j+1} sums
    y1 = (double)((2.0L / kPi) * (lg * j1l - 1.0L / xl - 0.25L * xl * sy1));
}

// Hankel asymptotic expansion for J_n, Y_n, n = 0 or 1, x >= 20.
// Truncated where terms stop decreasing; at x >= 20 the smallest term is
// far below 1e-16.
void jy01_asymptotic(int n, double x, double& jn, double& yn) {
    const long double mu = 4.0L * n * n;
    const long double ix8 = 1.0L / (8.0L * (long double)x);
    long double p = 1.0L, q = 0.0L;
    long double term = 1.0L;
    // P: even factors, Q: odd factors of the 2F0-type series
    long double prev = std::numeric_limits<long double>::max();
    for (int k = 0; k < 40; ++k) {
        const long double f = (mu - (4 * k + 1) * (4 * k + 1)) / (2 * k + 1) * ix8;
        term *= f;
        if (fabsl(term) >= prev) break;
        prev = fabsl(term);
        if (k % 2 == 0) q += term; else q -= term;   // signs: +,-,+,- on Q terms
        const long double f2 = (mu - (4 * k + 3) * (4 * k + 3)) / (2 * k + 2) * ix8;
        term *= f2;
        if (fabsl(term) >= prev) break;
        prev = fabsl(term);
        if (k % 2 == 0) p -= term; else p += term;   // P terms alternate starting -
        if (fabsl(term) < 1e-24L) break;
    }
    const long double chi = (long double)x - (0.5L * n + 0.25L) * kPi;
    const long double amp = sqrtl(2.0L / (kPi * (long double)x));
    jn = (double)(amp * (p * cosl(chi) - q * sinl(chi)));
    yn = (double)(amp * (p * sinl(chi) + q * cosl(chi)));
}

void jy01(double x, double& j0, double& j1, double& y0, double& y1) {
    if (x < 20.0) {
        jy01_series(x, j0, j1, y0, y1);
    } else {
        jy01_asymptotic(0, x, j0, y0);
        jy01_asymptotic(1, x, j1, y1);
    }
}

void check_domain(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel: argument must be > 0");
}

// Miller backward recurrence: fills j[0..m_max] normalized by
// J_0 + 2 sum J_{2k} = 1. Start order is raised until two runs agree.
void miller_j(int m_max, double x, std::span<double> out) {
    const long double xl = x;
    int start = m_max + 16 + (int)(2.0 * std::sqrt((double)std::max(m_max, (int)x) + 1.0));
    if (start < (int)x + 16) start = (int)x + 16;
    std::vector<long double> buf;
    double prev_j0 = std::numeric_limits<double>::quiet_NaN();
    for (int attempt = 0; attempt < 6; ++attempt) {
        buf.assign(start + 2, 0.0L);
        buf[start + 1] = 0.0L;
        buf[start] = 1e-30L;
        for (int l = start; l >= 1; --l) {
            buf[l - 1] = (2.0L * l / xl) * buf[l] - buf[l + 1];
            if (fabsl(buf[l - 1]) > 1e280L) {
                for (int i = l - 1; i <= start + 1; ++i) buf[i] *= 1e-280L;
            }
        }
        long double norm = buf[0];
        for (int l = 2; l <= start; l += 2) norm += 2.0L * buf[l];
        for (int l = 0; l <= std::min(m_max, start); ++l)
            out[l] = (double)(buf[l] / norm);
        for (int l = start + 1; l <= m_max; ++l) out[l] = 0.0;  // underflow regime
        if (attempt > 0 && std::abs(out[0] - prev_j0) <= 1e-15 * std::max(1.0, std::abs(out[0])))
            return;
        prev_j0 = out[0];
        start += start / 2 + 16;
    }
}

}  // namespace

double bessel_j(int m, double x) {
    check_domain(x);
    if (m < 0) throw std::domain_error("bessel_j: order must be >= 0");
    double j0, j1, y0, y1;
    if (m <= 1) {
        jy01(x, j0, j1, y0, y1);
        return m == 0 ? j0 : j1;
    }
    std::vector<double> j(m + 1);
    miller_j(m, x, j);
    return j[m];
}

double bessel_y(int m, double x) {
    check_domain(x);
    if (m < 0) throw std::domain_error("bessel_y: order must be >= 0");
    double j0, j1, y0, y1;
    jy01(x, j0, j1, y0, y1);
    if (m == 0) return y0;
    if (m == 1) return y1;
    double ym1 = y0, ym = y1;
    for (int l = 1; l < m; ++l) {
        const double ynext = (2.0 * l / x) * ym - ym1;
        ym1 = ym;
        ym = ynext;
    }
    return ym;
}

cdouble hankel1(int m, double x) {
    check_domain(x);
    if (m < 0) throw std::domain_error("hankel1: order must be >= 0");
    if (m <= 1) {
        double j0, j1, y0, y1;
        jy01(x, j0, j1, y0, y1);
        return m == 0 ? cdouble{j0, y0} : cdouble{j1, y1};
    }
    return {bessel_j(m, x), bessel_y(m, x)};
}

void bessel_jy_array(int m_max, double x, std::span<double> j_out, std::span<double> y_out) {
    check_domain(x);
    if (m_max < 0) throw std::domain_error("bessel_jy_array: m_max must be >= 0");
    if ((int)j_out.size() < m_max + 1 || (int)y_out.size() < m_max + 1)
        throw std::invalid_argument("bessel_jy_array: output spans too small");
    double j0, j1, y0, y1;
    jy01(x, j0, j1, y0, y1);
    if (m_max >= 2) {
        miller_j(m_max, x, j_out);
    } else {
        j_out[0] = j0;
        if (m_max >= 1) j_out[1] = j1;
    }
    j_out[0] = j0;
    if (m_max >= 1) j_out[1] = j1;
    y_out[0] = y0;
    if (m_max >= 1) y_out[1] = y1;
    for (int l = 1; l < m_max; ++l)
        y_out[l + 1] = (2.0 * l / x) * y_out[l] - y_out[l - 1];
}

EllipticKE elliptic_ke(double m) {
    if (!(m >= 0.0) || m >= 1.0)
        throw std::domain_error("elliptic_ke: parameter m must satisfy 0 <= m < 1");
    double a = 1.0, b = std::sqrt(1.0 - m), c = std::sqrt(m);
    double csum = 0.5 * c * c;  // 2^{n-1} c_n^2 accumulated from n = 0
    double pow2 = 0.5;
    for (int it = 0; it < 60 && c > 1e-18 * a; ++it) {
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        pow2 *= 2.0;
        csum += pow2 * c * c;
    }
    const double k = kPi / (2.0 * a);
    return {k, k * (1.0 - csum)};
}

LegendrePair legendre_half(int n, double z) {
    if (n < 0) throw std::domain_error("legendre_half: degree index must be >= 0");
    if (z == 1.0) throw std::domain_error("legendre_half: Q_{n-1/2} diverges at z = 1");
    if (!(z > -1.0 && z < 1.0))
        throw std::domain_error("legendre_half: argument outside validated range (-1, 1)");
    if (n > 64)
        throw std::domain_error(
            "legendre_half: degree beyond validated range n <= 64; accuracy not guaranteed");

    // Toroidal-harmonic seeds, parameter convention m = squared modulus:
    //   P_{-1/2}(z) = (2/pi) K((1-z)/2)      Q_{-1/2}(z) = K((1+z)/2)
    //   P_{+1/2}(z) = (2/pi)(2E - K)((1-z)/2) Q_{+1/2}(z) = (K - 2E)((1+z)/2)
    const EllipticKE em = elliptic_ke(0.5 * (1.0 - z));
    const EllipticKE ep = elliptic_ke(0.5 * (1.0 + z));
    double pm1 = (2.0 / kPi) * em.k;
    double p0 = (2.0 / kPi) * (2.0 * em.e - em.k);
    double qm1 = ep.k;
    double q0 = ep.k - 2.0 * ep.e;
    if (n == 0) return {cdouble{pm1}, cdouble{qm1}, n, z};
    if (n == 1) return {cdouble{p0}, cdouble{q0}, n, z};
    // (nu+1) F_{nu+1} = (2nu+1) z F_nu - nu F_{nu-1} at nu = j - 1/2, run forward.
    for (int j = 1; j < n; ++j) {
        const double a = 2.0 * j * z;
        const double b = j - 0.5;
        const double c = j + 0.5;
        const double p1 = (a * p0 - b * pm1) / c;
        const double q1 = (a * q0 - b * qm1) / c;
        pm1 = p0; p0 = p1;
        qm1 = q0; q0 = q1;
    }
    return {cdouble{p0}, cdouble{q0}, n, z};
}

cdouble lgf_diagonal(int n, double omega2) {
    if (n < 0) throw std::domain_error("lgf_diagonal: n must be >= 0");
    if (omega2 == 4.0)
        throw std::domain_error("lgf_diagonal: formula invalid at omega2 = 4 (ring solution regime)");
    if (!(omega2 > 0.0 && omega2 < 8.0))
        throw std::domain_error("lgf_diagonal: omega2 outside validated range (0, 8)");
    const double d = 4.0 - omega2;
    const double z = 1.0 - d * d / 8.0;
    const LegendrePair pq = legendre_half(n, z);
    const double s = omega2 < 4.0 ? -1.0 : 1.0;
    const double sign_n = (n % 2 == 0) ? 1.0 : -1.0;
    return sign_n * (s * 0.25 * pq.p - cdouble{0.0, 1.0} * pq.q / (2.0 * kPi));
}

}  // namespace ulgf::specfun
