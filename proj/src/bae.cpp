#include "ulgf/bae.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>

namespace ulgf::bae {

namespace {
double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double resolved_eta(const Kernel& kernel, double omega2) {
    if (kernel.kind != KernelKind::combined) return 0.0;
    if (kernel.eta > 0.0) return kernel.eta;
    return std::max(1.0, std::sqrt(omega2));
}
}  // namespace

cdouble kernel_entry(const Kernel& kernel, const lgf::LgfTable& table, LatticeIndex s, int t,
                     const geometry::CutGeometry& cut) {
    const LatticeIndex tt = cut.gamma_minus[t];
    const cdouble g_st = table.at(s.m - tt.m, s.n - tt.n);
    if (kernel.kind == KernelKind::single) return g_st;
    cdouble d{0.0, 0.0};
    for (const LatticeIndex& r : cut.e_neighbors[t])
        d += g_st - table.at(s.m - r.m, s.n - r.n);
    if (kernel.kind == KernelKind::dbl) return d;
    return d - cdouble{0.0, resolved_eta(kernel, table.omega2())} * g_st;
}

std::vector<cdouble> apply_kernel(const Kernel& kernel, const lgf::LgfTable& table,
                                  const geometry::CutGeometry& cut,
                                  std::span<const LatticeIndex> targets,
                                  std::span<const cdouble> q) {
    if (q.size() != cut.gamma_minus.size())
        throw std::invalid_argument("apply_kernel: density length != |gamma_-|");
    std::vector<cdouble> out(targets.size());
    const int nt = (int)cut.gamma_minus.size();
    const double eta = resolved_eta(kernel, table.omega2());
#pragma omp parallel for schedule(static)
    for (long long si = 0; si < (long long)targets.size(); ++si) {
        const LatticeIndex s = targets[si];
        cdouble acc{0.0, 0.0};
        if (kernel.kind == KernelKind::single) {
            for (int t = 0; t < nt; ++t) {
                const LatticeIndex tt = cut.gamma_minus[t];
                acc += table.at(s.m - tt.m, s.n - tt.n) * q[t];
            }
        } else {
            const cdouble ieta{0.0, eta};
            for (int t = 0; t < nt; ++t) {
                const LatticeIndex tt = cut.gamma_minus[t];
                const cdouble g_st = table.at(s.m - tt.m, s.n - tt.n);
                cdouble d{0.0, 0.0};
                for (const LatticeIndex& r : cut.e_neighbors[t])
                    d += g_st - table.at(s.m - r.m, s.n - r.n);
                if (kernel.kind == KernelKind::combined) d -= ieta * g_st;
                acc += d * q[t];
            }
        }
        out[si] = acc;
    }
    return out;
}

GmresReport gmres(const ApplyFn& apply, std::span<const cdouble> b, std::span<cdouble> x,
                  const GmresParams& params) {
    using std::abs;
    const double t0 = now_seconds();
    const size_t n = b.size();
    GmresReport rep;
    std::fill(x.begin(), x.end(), cdouble{0.0, 0.0});
    double bnorm = 0.0;
    for (const cdouble& v : b) bnorm += std::norm(v);
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0) {
        rep.converged = true;
        rep.note = "zero right-hand side";
        rep.seconds = now_seconds() - t0;
        return rep;
    }

    const int m = std::max(1, params.restart);
    std::vector<std::vector<cdouble>> v;  // Krylov basis
    std::vector<cdouble> h((size_t)(m + 1) * m, cdouble{});
    std::vector<cdouble> cs(m), sn(m), g(m + 1);
    std::vector<cdouble> w(n), r(n);

    int total_iters = 0;
    double relres = 1.0;
    while (total_iters < params.max_iter) {
        // r = b - A x
        apply(x, r);
        for (size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        double rnorm = 0.0;
        for (const cdouble& vv : r) rnorm += std::norm(vv);
        rnorm = std::sqrt(rnorm);
        relres = rnorm / bnorm;
        if (relres <= params.tol) {
            rep.converged = true;
            break;
        }
        v.assign(1, std::vector<cdouble>(n));
        for (size_t i = 0; i < n; ++i) v[0][i] = r[i] / rnorm;
        std::fill(g.begin(), g.end(), cdouble{});
        g[0] = rnorm;

        int k = 0;
        for (; k < m && total_iters < params.max_iter; ++k, ++total_iters) {
            apply(v[k], w);
            // modified Gram-Schmidt
            for (int i = 0; i <= k; ++i) {
                cdouble hik{0.0, 0.0};
                for (size_t j = 0; j < n; ++j) hik += std::conj(v[i][j]) * w[j];
                h[(size_t)i * m + k] = hik;
                for (size_t j = 0; j < n; ++j) w[j] -= hik * v[i][j];
            }
            double wnorm = 0.0;
            for (const cdouble& vv : w) wnorm += std::norm(vv);
            wnorm = std::sqrt(wnorm);
            h[(size_t)(k + 1) * m + k] = wnorm;
            const bool breakdown = wnorm < 1e-300;
            if (!breakdown) {
                v.emplace_back(n);
                for (size_t j = 0; j < n; ++j) v[k + 1][j] = w[j] / wnorm;
            }
            // apply accumulated Givens rotations [c, s; -conj(s), c] to the new column
            for (int i = 0; i < k; ++i) {
                const cdouble t1 =
                    cs[i] * h[(size_t)i * m + k] + sn[i] * h[(size_t)(i + 1) * m + k];
                const cdouble t2 = -std::conj(sn[i]) * h[(size_t)i * m + k] +
                                   cs[i] * h[(size_t)(i + 1) * m + k];
                h[(size_t)i * m + k] = t1;
                h[(size_t)(i + 1) * m + k] = t2;
            }
            const cdouble hk = h[(size_t)k * m + k];
            const cdouble hk1 = h[(size_t)(k + 1) * m + k];
            const double denom = std::sqrt(std::norm(hk) + std::norm(hk1));
            if (denom < 1e-300) {
                rep.note = "Arnoldi breakdown (happy at basis size " + std::to_string(k + 1) + ")";
                ++k;
                break;
            }
            cs[k] = abs(hk) / denom;
            const cdouble phase = (abs(hk) > 0.0) ? hk / abs(hk) : cdouble{1.0, 0.0};
            sn[k] = phase * std::conj(hk1) / denom;
            if (breakdown)
                rep.note = "happy breakdown at basis size " + std::to_string(k + 1);
            h[(size_t)k * m + k] = cs[k] * hk + sn[k] * hk1;
            h[(size_t)(k + 1) * m + k] = 0.0;
            g[k + 1] = -std::conj(sn[k]) * g[k];
            g[k] = cs[k] * g[k];
            relres = abs(g[k + 1]) / bnorm;
            if (relres <= params.tol || breakdown) {
                ++k;
                break;
            }
        }
        // back-substitute the k x k triangular system, update x
        std::vector<cdouble> yk(k);
        for (int i = k - 1; i >= 0; --i) {
            cdouble sum = g[i];
            for (int j = i + 1; j < k; ++j) sum -= h[(size_t)i * m + j] * yk[j];
            yk[i] = sum / h[(size_t)i * m + i];
        }
        for (int i = 0; i < k; ++i)
            for (size_t j = 0; j < n; ++j) x[j] += yk[i] * v[i][j];
        if (relres <= params.tol) {
            rep.converged = true;
            break;
        }
        if (k == 0) break;  // no progress possible
    }
    rep.iterations = total_iters;
    rep.rel_residual = relres;
    if (relres <= params.tol) rep.converged = true;
    rep.seconds = now_seconds() - t0;
    return rep;
}

std::pair<LayerDensity, SolveReport> solve_density(const Kernel& kernel,
                                                   const lgf::LgfTable& table,
                                                   const geometry::CutGeometry& cut,
                                                   const closure::ClosureMatrices& closure,
                                                   const GmresParams& params) {
    const size_t nq = cut.gamma_minus.size();
    if (closure.rows() != nq)
        throw std::invalid_argument("solve_density: closure rows != |gamma_-|");
    SolveReport rep;
    rep.strategy = "density";
    rep.n_gamma_minus = nq;
    rep.n_gamma_plus_aug = cut.gamma_plus_aug.size();

    std::vector<cdouble> phi_plus_u(nq), phi_minus_u(nq);
    double apply_seconds = 0.0;
    ApplyFn op = [&](std::span<const cdouble> qv, std::span<cdouble> out) {
        const double t0 = now_seconds();
        const std::vector<cdouble> on_plus =
            apply_kernel(kernel, table, cut, cut.gamma_plus_aug, qv);
        const std::vector<cdouble> on_minus = apply_kernel(kernel, table, cut, cut.gamma_minus, qv);
        closure.apply_plus(on_plus, phi_plus_u);
        closure.apply_minus(on_minus, phi_minus_u);
        for (size_t i = 0; i < out.size(); ++i) out[i] = phi_plus_u[i] + phi_minus_u[i];
        apply_seconds += now_seconds() - t0;
    };

    LayerDensity density;
    density.kernel = kernel;
    density.omega2 = table.omega2();
    density.q.assign(nq, cdouble{0.0, 0.0});
    rep.gmres = gmres(op, closure.rhs, density.q, params);
    rep.apply_seconds = apply_seconds;
    if (!rep.gmres.converged) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "solve_density: GMRES did not converge (%d iterations, relative "
                      "residual %.3e)",
                      rep.gmres.iterations, rep.gmres.rel_residual);
        throw ConvergenceError(msg);
    }
    return {std::move(density), std::move(rep)};
}

namespace {
using DenseMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic>;
using DenseVector = Eigen::Matrix<cdouble, Eigen::Dynamic, 1>;

DenseMatrix dense_kernel(const Kernel& kernel, const lgf::LgfTable& table,
                         const geometry::CutGeometry& cut,
                         std::span<const LatticeIndex> rows) {
    DenseMatrix out(rows.size(), cut.gamma_minus.size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t t = 0; t < cut.gamma_minus.size(); ++t)
            out((Eigen::Index)i, (Eigen::Index)t) = kernel_entry(kernel, table, rows[i], (int)t, cut);
    return out;
}
}  // namespace

std::pair<std::vector<cdouble>, SolveReport> solve_schur(const Kernel& kernel,
                                                         const lgf::LgfTable& table,
                                                         const geometry::CutGeometry& cut,
                                                         const closure::ClosureMatrices& closure) {
    const size_t nq = cut.gamma_minus.size();
    if (nq > 4000)
        throw std::invalid_argument(
            "solve_schur: |gamma_-| exceeds the dense-factorization guard (4000); use the "
            "density strategy");
    if (closure.rows() != nq)
        throw std::invalid_argument("solve_schur: closure rows != |gamma_-|");
    SolveReport rep;
    rep.strategy = "schur";
    rep.n_gamma_minus = nq;
    rep.n_gamma_plus_aug = cut.gamma_plus_aug.size();
    const double t0 = now_seconds();

    const DenseMatrix k_minus = dense_kernel(kernel, table, cut, cut.gamma_minus);
    const DenseMatrix k_plus = dense_kernel(kernel, table, cut, cut.gamma_plus_aug);
    Eigen::PartialPivLU<DenseMatrix> lu(k_minus);
    const double rcond = lu.rcond();
    if (rcond < 1e-12) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "K_- condition estimate %.3e exceeds 1e12", 1.0 / rcond);
        rep.gmres.note = buf;
    }

    // M = Phi_+ K~_+ K_-^{-1} + Phi_-, assembled column by column
    const DenseMatrix kinv_cols = lu.solve(DenseMatrix::Identity((Eigen::Index)nq, (Eigen::Index)nq));
    const DenseMatrix kp_kinv = k_plus * kinv_cols;
    DenseMatrix m = DenseMatrix::Zero((Eigen::Index)nq, (Eigen::Index)nq);
    for (size_t r = 0; r < nq; ++r) {
        for (const auto& e : closure.plus_rows[r])
            m.row((Eigen::Index)r) += e.w * kp_kinv.row(e.col);
        for (const auto& e : closure.minus_rows[r]) m((Eigen::Index)r, e.col) += e.w;
    }
    DenseVector rhs((Eigen::Index)nq);
    for (size_t i = 0; i < nq; ++i) rhs((Eigen::Index)i) = closure.rhs[i];
    const DenseVector u = m.partialPivLu().solve(rhs);
    std::vector<cdouble> out(nq);
    for (size_t i = 0; i < nq; ++i) out[i] = u((Eigen::Index)i);
    rep.apply_seconds = now_seconds() - t0;
    rep.gmres.converged = true;
    rep.gmres.rel_residual = (m * u - rhs).norm() / std::max(rhs.norm(), 1e-300);
    return {std::move(out), std::move(rep)};
}

LayerDensity schur_density(const Kernel& kernel, const lgf::LgfTable& table,
                           const geometry::CutGeometry& cut, std::span<const cdouble> u_minus) {
    const size_t nq = cut.gamma_minus.size();
    if (u_minus.size() != nq) throw std::invalid_argument("schur_density: size mismatch");
    const DenseMatrix k_minus = dense_kernel(kernel, table, cut, cut.gamma_minus);
    DenseVector u((Eigen::Index)nq);
    for (size_t i = 0; i < nq; ++i) u((Eigen::Index)i) = u_minus[i];
    const DenseVector q = k_minus.partialPivLu().solve(u);
    LayerDensity density;
    density.kernel = kernel;
    density.omega2 = table.omega2();
    density.q.resize(nq);
    for (size_t i = 0; i < nq; ++i) density.q[i] = q((Eigen::Index)i);
    return density;
}

}  // namespace ulgf::bae
