#include "ulgf/analytic.hpp"

#include <cmath>

#include "ulgf/specfun.hpp"

namespace ulgf::analytic {

namespace {
// i^m cycles with period 4
cdouble ipow(int m) {
    switch (((m % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}
}  // namespace

IncidentWave::IncidentWave(double k_, Vec2 d) : k(k_), direction(d) {
    if (!(k > 0.0)) throw std::invalid_argument("IncidentWave: k must be > 0");
    const double len = norm(d);
    if (!(len > 0.0)) throw std::invalid_argument("IncidentWave: direction must be nonzero");
    direction = {d.x / len, d.y / len};
}

double IncidentWave::theta_inc() const { return std::atan2(direction.y, direction.x); }

cdouble plane_wave(const IncidentWave& wave, Point2 p) {
    const double phase = wave.k * dot(wave.direction, p);
    return {std::cos(phase), std::sin(phase)};
}

cdouble neumann_data(const IncidentWave& wave, Point2 p, Vec2 n) {
    return cdouble{0.0, wave.k * dot(wave.direction, n)} * plane_wave(wave, p);
}

MieSolution::MieSolution(const IncidentWave& wave, double radius, Polarization pol,
                         int truncation)
    : radius_(radius), pol_(pol), m_max_(truncation) {
    if (!(radius > 0.0)) throw std::invalid_argument("MieSolution: radius must be > 0");
    if (truncation < 1) throw std::invalid_argument("MieSolution: truncation must be >= 1");
    const double x = wave.k * radius;
    std::vector<double> j(m_max_ + 2), y(m_max_ + 2);
    specfun::bessel_jy_array(m_max_ + 1, x, j, y);
    coef_.resize(m_max_ + 1);
    for (int m = 0; m <= m_max_; ++m) {
        cdouble ratio;
        if (pol_ == Polarization::TM) {
            ratio = j[m] / cdouble{j[m], y[m]};
        } else {
            // F'_m = (F_{m-1} - F_{m+1}) / 2, with F_{-1} = -F_1
            const double jm1 = (m == 0) ? -j[1] : j[m - 1];
            const double jd = 0.5 * (jm1 - j[m + 1]);
            const double ym1 = (m == 0) ? -y[1] : y[m - 1];
            const cdouble hd = 0.5 * cdouble{jm1 - j[m + 1], ym1 - y[m + 1]};
            ratio = jd / hd;
        }
        coef_[m] = -ipow(m) * ratio;
    }
    if (std::abs(coef_[m_max_]) >= 1e-14)
        throw ConvergenceError(
            "MieSolution: series coefficients not decayed below 1e-14 at the truncation "
            "order; raise the truncation");
}

cdouble MieSolution::scattered(const IncidentWave& wave, Point2 p) const {
    const double r = norm(p);
    if (r < radius_ * (1.0 - 1e-12))
        throw std::domain_error("mie_scattered: point inside the scatterer");
    const double theta = std::atan2(p.y, p.x);
    const double x = wave.k * r;
    std::vector<double> j(m_max_ + 1), y(m_max_ + 1);
    specfun::bessel_jy_array(m_max_, x, j, y);
    const double dth = theta - wave.theta_inc();
    cdouble total = coef_[0] * cdouble{j[0], y[0]};
    for (int m = 1; m <= m_max_; ++m)
        total += 2.0 * coef_[m] * cdouble{j[m], y[m]} * std::cos(m * dth);
    return total;
}

}  // namespace ulgf::analytic
