#ifndef ULGF_ANALYTIC_HPP
#define ULGF_ANALYTIC_HPP

#include <vector>

#include "ulgf/common.hpp"

namespace ulgf::analytic {

/// Unit-direction plane wave e^{i k d . x}.
struct IncidentWave {
    double k;
    Vec2 direction;

    IncidentWave(double k_, Vec2 d);
    double theta_inc() const;
};

cdouble plane_wave(const IncidentWave& wave, Point2 p);

/// Neumann boundary data du_inc/dn = i k (d . n) e^{i k d . p}.
cdouble neumann_data(const IncidentWave& wave, Point2 p, Vec2 n);

enum class Polarization { TM, TE };

/// Truncated separation-of-variables reference solution for plane-wave
/// scattering by a sound-hard/soft circle (PEC cylinder): TM enforces the
/// Dirichlet condition term by term with ratios J_m/H^(1)_m at kR, TE the
/// Neumann condition with derivative ratios. Coefficients are stored for
/// m >= 0 as c_m = -i^m ratio_m; negative orders fold onto positive ones by
/// the reflection identities, giving
///   u_sc = c_0 H_0(kr) + sum_{m>=1} 2 c_m H_m(kr) cos(m (theta - theta_inc)).
class MieSolution {
public:
    /// Throws ConvergenceError when the coefficients have not decayed below
    /// 1e-14 by the truncation order (silent truncation error refused).
    MieSolution(const IncidentWave& wave, double radius, Polarization pol,
                int truncation = 100);

    double radius() const { return radius_; }
    Polarization polarization() const { return pol_; }
    int truncation() const { return m_max_; }
    const std::vector<cdouble>& coefficients() const { return coef_; }

    /// Scattered field at |p| >= R; domain error inside the scatterer.
    cdouble scattered(const IncidentWave& wave, Point2 p) const;

private:
    double radius_;
    Polarization pol_;
    int m_max_;
    std::vector<cdouble> coef_;
};

/// Convenience free function mirroring the operation name.
inline cdouble mie_scattered(const MieSolution& sol, const IncidentWave& wave, Point2 p) {
    return sol.scattered(wave, p);
}

}  // namespace ulgf::analytic

#endif
