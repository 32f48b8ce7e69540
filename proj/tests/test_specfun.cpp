#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ulgf/specfun.hpp"

using namespace ulgf;
using namespace ulgf::specfun;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Independent oracle: ascending power series for J_m in long double,
// summed to machine convergence. Good to ~1e-16 relative below x ~ 25.
double j_series_oracle(int m, double x) {
    const long double q = 0.25L * (long double)x * (long double)x;
    long double fact = 1.0L;
    for (int i = 1; i <= m; ++i) fact *= i;
    long double term = powl(0.5L * (long double)x, m) / fact;
    long double sum = term;
    for (int j = 1; j < 400; ++j) {
        term *= -q / ((long double)j * (j + m));
        sum += term;
        if (fabsl(term) < 1e-25L * fabsl(sum) + 1e-4900L) break;
    }
    return (double)sum;
}

// Independent oracle for Y_0: the integral representation
//   Y_0(x) = (4/pi^2)[ (gamma + ln 2x) (pi/2) J_0(x)
//                      + 2 I_log - pi ln 2 cos x ],
//   I_log = int_0^{pi/2} ln(sin t) (cos(x cos t) - cos x) dt,
// with the log singularity tamed by subtracting the endpoint value.
long double adaptive_simpson_ld(long double (*f)(long double, long double), long double arg,
                                long double a, long double b, long double tol, int depth) {
    const long double m = 0.5L * (a + b);
    const long double fa = f(a, arg), fm = f(m, arg), fb = f(b, arg);
    const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    struct Rec {
        static long double go(long double (*f)(long double, long double), long double arg,
                              long double a, long double b, long double fa, long double fm,
                              long double fb, long double whole, long double tol, int depth) {
            const long double m = 0.5L * (a + b);
            const long double lm = 0.5L * (a + m), rm = 0.5L * (m + b);
            const long double flm = f(lm, arg), frm = f(rm, arg);
            const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
            const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
            const long double delta = left + right - whole;
            if (depth <= 0 || fabsl(delta) <= 15.0L * tol)
                return left + right + delta / 15.0L;
            return go(f, arg, a, m, fa, flm, fm, left, 0.5L * tol, depth - 1) +
                   go(f, arg, m, b, fm, frm, fb, right, 0.5L * tol, depth - 1);
        }
    };
    return Rec::go(f, arg, a, b, fa, fm, fb, whole, tol, depth);
}

long double y0_log_part(long double t, long double x) {
    if (t <= 0.0L) return 0.0L;  // ln(sin t)(cos(x cos t) - cos x) -> 0 as t -> 0
    return logl(sinl(t)) * (cosl(x * cosl(t)) - cosl(x));
}

double y0_integral_oracle(double x) {
    const long double xl = x;
    const long double gamma = 0.57721566490153286060651209008240243L;
    const long double pi = 3.14159265358979323846264338327950288L;
    const long double ilog = adaptive_simpson_ld(y0_log_part, xl, 0.0L, 0.5L * pi, 1e-21L, 40);
    const long double j0 = j_series_oracle(0, x);
    const long double val =
        (4.0L / (pi * pi)) *
        ((gamma + logl(2.0L * xl)) * 0.5L * pi * j0 + 2.0L * ilog - pi * logl(2.0L) * cosl(xl));
    return (double)val;
}

// Mehler-Dirichlet oracles for the Ferrers functions of half-odd degree.
struct MdArgs {
    int n;
    long double theta;
};
MdArgs g_md;

long double md_p_integrand(long double s, long double) {
    const long double th = g_md.theta;
    if (s == 0.0L) return 2.0L * cosl(g_md.n * th) / sqrtl(2.0L * sinl(th));
    const long double t = th - s * s;
    return 2.0L * s * cosl(g_md.n * t) / sqrtl(2.0L * cosl(t) - 2.0L * cosl(th));
}

long double md_q_integrand(long double s, long double) {
    const long double th = g_md.theta;
    if (s == 0.0L) return 2.0L * cosl(g_md.n * th) / sqrtl(2.0L * sinl(th));
    const long double t = th + s * s;
    return 2.0L * s * cosl(g_md.n * t) / sqrtl(2.0L * cosl(th) - 2.0L * cosl(t));
}

double md_p_oracle(int n, double z) {
    g_md = {n, acosl((long double)z)};
    const long double pi = 3.14159265358979323846264338327950288L;
    return (double)((2.0L / pi) *
                    adaptive_simpson_ld(md_p_integrand, 0.0L, 0.0L, sqrtl(g_md.theta), 1e-19L, 40));
}

double md_q_oracle(int n, double z) {
    g_md = {n, acosl((long double)z)};
    const long double pi = 3.14159265358979323846264338327950288L;
    return (double)adaptive_simpson_ld(md_q_integrand, 0.0L, 0.0L, sqrtl(pi - g_md.theta),
                                       1e-19L, 40);
}

}  // namespace

TEST_CASE("bessel_j small-argument limits and domain") {
    CHECK(bessel_j(0, 1e-12) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(bessel_j(1, 1e-12)) < 1e-11);
    CHECK_THROWS_AS(bessel_j(0, 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_j(0, -1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_j(-1, 1.0), std::domain_error);
}

TEST_CASE("bessel_j matches extended-precision series oracle") {
    // frozen from the series oracle; cross-checked to 30 digits externally
    CHECK(bessel_j(5, 10.0) == doctest::Approx(-0.23406152818679364).epsilon(1e-13));
    CHECK(j_series_oracle(5, 10.0) == doctest::Approx(-0.23406152818679364).epsilon(1e-15));
    for (int m : {0, 1, 2, 7, 23, 60, 150}) {
        for (double x : {0.3, 2.0, 9.5, 24.0}) {
            const double ref = j_series_oracle(m, x);
            if (std::abs(ref) > 1e-280)
                CHECK(bessel_j(m, x) == doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("hankel1 value, Wronskian, and large-argument behavior") {
    // frozen: J_0(1) and Y_0(1) from the series and integral oracles
    const cdouble h = hankel1(0, 1.0);
    CHECK(h.real() == doctest::Approx(0.7651976865579666).epsilon(1e-13));
    CHECK(h.imag() == doctest::Approx(0.08825696421567696).epsilon(1e-12));
    CHECK(y0_integral_oracle(1.0) == doctest::Approx(0.08825696421567696).epsilon(1e-12));

    // Bessel Wronskian J_{m+1} Y_m - J_m Y_{m+1} = 2/(pi x)
    for (int m : {0, 1, 2, 5, 10, 25, 50}) {
        for (double x : {0.5, 1.0, 5.0, 20.0, 100.0}) {
            const double w = bessel_j(m + 1, x) * bessel_y(m, x) -
                             bessel_j(m, x) * bessel_y(m + 1, x);
            const double ref = 2.0 / (kPi * x);
            CHECK(w == doctest::Approx(ref).epsilon(1e-10));
        }
    }

    // |H0(x)| sqrt(pi x / 2) -> 1
    const double mod = std::abs(hankel1(0, 1000.0)) * std::sqrt(kPi * 1000.0 / 2.0);
    CHECK(mod == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(hankel1(0, -2.0), std::domain_error);
}

TEST_CASE("hankel1 satisfies the Bessel ODE (finite-difference residual)") {
    const double hstep = 1e-4;
    for (int m : {0, 1, 3, 8, 20}) {
        for (double x : {2.0, 7.5, 31.0, 120.0}) {
            const cdouble fm = hankel1(m, x - hstep);
            const cdouble f0 = hankel1(m, x);
            const cdouble fp = hankel1(m, x + hstep);
            const cdouble d1 = (fp - fm) / (2.0 * hstep);
            const cdouble d2 = (fp - 2.0 * f0 + fm) / (hstep * hstep);
            const cdouble res = x * x * d2 + x * d1 + (x * x - (double)m * m) * f0;
            const double scale = std::abs(x * x * f0) + 1.0;
            CHECK(std::abs(res) / scale < 1e-4);
        }
    }
}

TEST_CASE("bessel_jy_array consistent with scalar entry points") {
    const int mmax = 100;
    std::vector<double> j(mmax + 1), y(mmax + 1);
    bessel_jy_array(mmax, 5.0, j, y);
    for (int m : {0, 1, 4, 30, 100}) {
        CHECK(j[m] == doctest::Approx(bessel_j(m, 5.0)).epsilon(1e-12));
        if (std::isfinite(y[m])) CHECK(y[m] == doctest::Approx(bessel_y(m, 5.0)).epsilon(1e-12));
    }
}

TEST_CASE("elliptic_ke degenerate value, monotonicity, oracle point") {
    const auto ke0 = elliptic_ke(0.0);
    CHECK(ke0.k == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(ke0.e == doctest::Approx(kPi / 2).epsilon(1e-15));

    double prev_gap = 0.0;
    for (double m = 0.05; m < 0.95; m += 0.05) {
        const auto ke = elliptic_ke(m);
        const double gap = ke.k - ke.e;
        CHECK(gap >= prev_gap);  // K - E >= 0 and increasing in m
        prev_gap = gap;
    }

    // frozen from direct quadrature of the defining integrals
    const auto ke = elliptic_ke(0.5);
    CHECK(ke.k == doctest::Approx(1.8540746773013719).epsilon(1e-14));
    CHECK(ke.e == doctest::Approx(1.3506438810476755).epsilon(1e-14));

    CHECK_THROWS_AS(elliptic_ke(1.0), std::domain_error);
    CHECK_THROWS_AS(elliptic_ke(-0.1), std::domain_error);
}

TEST_CASE("legendre_half seeds match Mehler-Dirichlet quadrature oracle") {
    for (double z : {0.3, -0.53125, 0.5}) {
        const auto pq0 = legendre_half(0, z);
        CHECK(pq0.p.real() == doctest::Approx(md_p_oracle(0, z)).epsilon(1e-9));
        CHECK(pq0.q.real() == doctest::Approx(md_q_oracle(0, z)).epsilon(1e-9));
        CHECK(std::abs(pq0.p.imag()) < 1e-12 * std::abs(pq0.p.real()));
        const auto pq3 = legendre_half(3, z);
        CHECK(pq3.p.real() == doctest::Approx(md_p_oracle(3, z)).epsilon(1e-9));
        CHECK(pq3.q.real() == doctest::Approx(md_q_oracle(3, z)).epsilon(1e-9));
    }
    // frozen from the quadrature oracle
    CHECK(legendre_half(0, 0.3).p.real() == doctest::Approx(1.1104880801350245).epsilon(1e-12));
    CHECK(legendre_half(0, 0.3).q.real() == doctest::Approx(2.0075983984243763).epsilon(1e-12));
}

TEST_CASE("legendre_half recurrence residual over validated degrees") {
    for (double z : {-0.7, -0.2, 0.4, 0.9}) {
        for (int n = 1; n <= 40; ++n) {
            const auto a = legendre_half(n - 1, z);
            const auto b = legendre_half(n, z);
            const auto c = legendre_half(n + 1, z);
            // (n + 1/2) F_{n+1} = 2 n z F_n - (n - 1/2) F_{n-1}
            const double lhs_p = (n + 0.5) * c.p.real();
            const double rhs_p = 2.0 * n * z * b.p.real() - (n - 0.5) * a.p.real();
            const double lhs_q = (n + 0.5) * c.q.real();
            const double rhs_q = 2.0 * n * z * b.q.real() - (n - 0.5) * a.q.real();
            const double sp = std::abs(lhs_p) + std::abs(rhs_p) + 1.0;
            const double sq = std::abs(lhs_q) + std::abs(rhs_q) + 1.0;
            CHECK(std::abs(lhs_p - rhs_p) / sp < 1e-10);
            CHECK(std::abs(lhs_q - rhs_q) / sq < 1e-10);
        }
    }
}

TEST_CASE("legendre_half domain guards") {
    CHECK_THROWS_AS(legendre_half(0, 1.0), std::domain_error);
    CHECK_THROWS_AS(legendre_half(0, -1.0), std::domain_error);
    CHECK_THROWS_AS(legendre_half(0, 1.5), std::domain_error);
    CHECK_THROWS_AS(legendre_half(65, 0.5), std::domain_error);
    CHECK_THROWS_AS(legendre_half(-1, 0.5), std::domain_error);
}

TEST_CASE("lgf_diagonal reference values and guards") {
    // frozen from the limiting-absorption quadrature oracle
    const cdouble g05 = lgf_diagonal(0, 0.5);
    CHECK(g05.real() == doctest::Approx(-0.34783129295597426).epsilon(1e-9));
    CHECK(g05.imag() == doctest::Approx(-0.26696370599773306).epsilon(1e-9));
    const cdouble g60 = lgf_diagonal(0, 6.0);
    CHECK(g60.real() == doctest::Approx(0.26829550178732797).epsilon(1e-9));
    CHECK(g60.imag() == doctest::Approx(-0.34322012515459605).epsilon(1e-9));

    CHECK_THROWS_AS(lgf_diagonal(0, 4.0), std::domain_error);
    CHECK_THROWS_AS(lgf_diagonal(0, 0.0), std::domain_error);
    CHECK_THROWS_AS(lgf_diagonal(0, 8.5), std::domain_error);
    CHECK_THROWS_AS(lgf_diagonal(-1, 0.5), std::domain_error);
}

TEST_CASE("lgf_diagonal is continuous in omega2 away from the band edge") {
    for (int n : {0, 3}) {
        for (double lo : {0.3, 4.3}) {
            const double hi = lo + 3.4;
            cdouble prev = lgf_diagonal(n, lo);
            for (double w2 = lo + 1e-3; w2 <= hi; w2 += 1e-3) {
                const cdouble cur = lgf_diagonal(n, w2);
                CHECK(std::abs(cur - prev) < 2e-2);  // no branch jumps between samples
                prev = cur;
            }
        }
    }
}
