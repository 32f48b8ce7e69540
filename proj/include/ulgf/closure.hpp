#ifndef ULGF_CLOSURE_HPP
#define ULGF_CLOSURE_HPP

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "ulgf/common.hpp"
#include "ulgf/geometry.hpp"

namespace ulgf::closure {

/// Robin-family boundary condition alpha u_n + beta u = g collocated at the
/// intersection points. The data callback receives the point on Gamma and
/// the outward unit normal there (the normal is what makes Neumann data
/// expressible). TM scattering uses (0, 1, -u_inc), TE uses (1, 0,
/// -du_inc/dn); complex impedance pairs are allowed.
struct BoundaryCondition {
    cdouble alpha;
    cdouble beta;
    std::function<cdouble(Point2, Vec2)> g;
};

struct Lagrange1D {
    std::array<double, 3> value;
    std::array<double, 3> deriv;
};

/// Cardinal values and derivatives of the 3-node Lagrange basis at x.
/// Evaluated in the product form phi_m(x) = w_m prod_{n != m} (x - x_n)
/// with the equispaced barycentric weights w = (1/2, -1, 1/2)/h^2, which
/// satisfies phi_m(x_n) = delta_mn exactly, including exact node hits.
Lagrange1D lagrange_basis_1d(const std::array<double, 3>& nodes, double x);

/// Sparse row-compressed boundary operators: one row per intersection,
/// columns split between the gamma_+ augmented ordering (plus) and the
/// gamma_- ordering (minus). A row touches at most the 9 nodes of its
/// patch across the two matrices.
struct ClosureMatrices {
    struct Entry {
        int col;
        cdouble w;
    };
    std::vector<std::vector<Entry>> plus_rows;
    std::vector<std::vector<Entry>> minus_rows;
    std::vector<cdouble> rhs;

    size_t rows() const { return rhs.size(); }

    /// y = Phi_+ x (x indexed by gamma_plus_aug)
    void apply_plus(std::span<const cdouble> x, std::span<cdouble> y) const;
    /// y = Phi_- x (x indexed by gamma_minus)
    void apply_minus(std::span<const cdouble> x, std::span<cdouble> y) const;
};

/// Tensor-product Lagrange collocation of alpha u_n + beta u = g on each
/// 3x3 cut-cell patch: the row entry for patch node (m, n) is
/// alpha (phi_m'(x) phi_n(y) n1 + phi_m(x) phi_n'(y) n2) + beta phi_m phi_n,
/// routed to the minus matrix when the node belongs to gamma_- and to the
/// plus matrix otherwise (the node is in gamma_+ u zeta by construction;
/// anything else trips a contract error).
ClosureMatrices assemble_phi(const geometry::CutGeometry& cut, const BoundaryCondition& bc);

}  // namespace ulgf::closure

#endif
