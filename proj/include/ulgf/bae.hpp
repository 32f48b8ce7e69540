#ifndef ULGF_BAE_HPP
#define ULGF_BAE_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ulgf/closure.hpp"
#include "ulgf/geometry.hpp"
#include "ulgf/lgf.hpp"

namespace ulgf::bae {

enum class KernelKind { single, dbl, combined };

/// Discrete layer kernel selector. The combined kernel is the discrete
/// Burton-Miller analogue D - i eta S; eta defaults to max(1, omega) when
/// not set explicitly.
struct Kernel {
    KernelKind kind = KernelKind::single;
    double eta = 0.0;

    static Kernel single() { return {KernelKind::single, 0.0}; }
    static Kernel dbl() { return {KernelKind::dbl, 0.0}; }
    static Kernel combined(double eta) { return {KernelKind::combined, eta}; }
};

/// Complex density on the gamma_- ordering of one CutGeometry.
struct LayerDensity {
    std::vector<cdouble> q;
    Kernel kernel;
    double omega2 = 0.0;
};

/// K(s, t): single S = G(s - t); double D = sum over the E-neighbors r of t
/// of [G(s - t) - G(s - r)] (zero when t has no E-neighbors); combined
/// C = D - i eta S.
cdouble kernel_entry(const Kernel& kernel, const lgf::LgfTable& table, LatticeIndex s, int t,
                     const geometry::CutGeometry& cut);

/// Dense convolution u_s = sum_t K(s,t) q_t over the target list; summation
/// runs in gamma_- index order for bit reproducibility, parallel over
/// targets.
std::vector<cdouble> apply_kernel(const Kernel& kernel, const lgf::LgfTable& table,
                                  const geometry::CutGeometry& cut,
                                  std::span<const LatticeIndex> targets,
                                  std::span<const cdouble> q);

struct GmresParams {
    double tol = 1e-10;
    int restart = 100;
    int max_iter = 2000;
};

struct GmresReport {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
    double seconds = 0.0;
    std::string note;
};

using ApplyFn = std::function<void(std::span<const cdouble>, std::span<cdouble>)>;

/// Restarted GMRES with modified Gram-Schmidt and Givens-rotation least
/// squares; relative-residual stopping, zero initial guess, deterministic.
/// b = 0 returns x = 0 immediately.
GmresReport gmres(const ApplyFn& apply, std::span<const cdouble> b, std::span<cdouble> x,
                  const GmresParams& params);

struct SolveReport {
    GmresReport gmres;
    size_t n_gamma_minus = 0;
    size_t n_gamma_plus_aug = 0;
    double apply_seconds = 0.0;
    std::string strategy;
};

/// Matrix-free density solve of (Phi_+ K~_+ + Phi_- K_-) q = g: each
/// operator application is one kernel convolution onto gamma~_+ and
/// gamma_-, followed by the two sparse closure multiplies. No
/// preconditioner. Throws ConvergenceError (report attached to the
/// exception message) when GMRES stalls.
std::pair<LayerDensity, SolveReport> solve_density(const Kernel& kernel,
                                                   const lgf::LgfTable& table,
                                                   const geometry::CutGeometry& cut,
                                                   const closure::ClosureMatrices& closure,
                                                   const GmresParams& params);

/// Dense Schur-route solve (Phi_+ K~_+ K_-^{-1} + Phi_-) u_{gamma_-} = g.
/// Factorizes the dense K_- (size guard |gamma_-| <= 4000); a condition
/// estimate above 1e12 is reported in the SolveReport note rather than
/// silently regularized. Returns boundary values u on gamma_-; the
/// corresponding density is K_-^{-1} u.
std::pair<std::vector<cdouble>, SolveReport> solve_schur(const Kernel& kernel,
                                                         const lgf::LgfTable& table,
                                                         const geometry::CutGeometry& cut,
                                                         const closure::ClosureMatrices& closure);

/// Density recovered from Schur boundary values: q = K_-^{-1} u_{gamma_-}.
LayerDensity schur_density(const Kernel& kernel, const lgf::LgfTable& table,
                           const geometry::CutGeometry& cut, std::span<const cdouble> u_minus);

}  // namespace ulgf::bae

#endif
