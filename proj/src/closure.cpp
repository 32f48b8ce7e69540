#include "ulgf/closure.hpp"

#include <cmath>

namespace ulgf::closure {

Lagrange1D lagrange_basis_1d(const std::array<double, 3>& nodes, double x) {
    const double h = nodes[1] - nodes[0];
    if (!(h > 0.0) || std::abs((nodes[2] - nodes[1]) - h) > 1e-12 * h)
        throw std::invalid_argument("lagrange_basis_1d: nodes must be equispaced increasing");
    Lagrange1D out;
    for (int m = 0; m < 3; ++m) {
        const double xa = nodes[(m + 1) % 3];
        const double xb = nodes[(m + 2) % 3];
        const double wm = 1.0 / ((nodes[m] - xa) * (nodes[m] - xb));
        out.value[m] = wm * (x - xa) * (x - xb);
        out.deriv[m] = wm * ((x - xa) + (x - xb));
    }
    return out;
}

void ClosureMatrices::apply_plus(std::span<const cdouble> x, std::span<cdouble> y) const {
    for (size_t r = 0; r < plus_rows.size(); ++r) {
        cdouble acc{0.0, 0.0};
        for (const Entry& e : plus_rows[r]) acc += e.w * x[e.col];
        y[r] = acc;
    }
}

void ClosureMatrices::apply_minus(std::span<const cdouble> x, std::span<cdouble> y) const {
    for (size_t r = 0; r < minus_rows.size(); ++r) {
        cdouble acc{0.0, 0.0};
        for (const Entry& e : minus_rows[r]) acc += e.w * x[e.col];
        y[r] = acc;
    }
}

ClosureMatrices assemble_phi(const geometry::CutGeometry& cut, const BoundaryCondition& bc) {
    if (bc.alpha == cdouble{0.0, 0.0} && bc.beta == cdouble{0.0, 0.0})
        throw std::invalid_argument("assemble_phi: (alpha, beta) must not both vanish");
    const size_t nrows = cut.intersections.size();
    ClosureMatrices out;
    out.plus_rows.resize(nrows);
    out.minus_rows.resize(nrows);
    out.rhs.resize(nrows);
    const double h = cut.grid.h;
    for (size_t r = 0; r < nrows; ++r) {
        const geometry::Intersection& is = cut.intersections[r];
        const Point2 ll = cut.grid.node(is.patch_ll.m, is.patch_ll.n);
        const std::array<double, 3> xs{ll.x, ll.x + h, ll.x + 2 * h};
        const std::array<double, 3> ys{ll.y, ll.y + h, ll.y + 2 * h};
        const Lagrange1D bx = lagrange_basis_1d(xs, is.point.x);
        const Lagrange1D by = lagrange_basis_1d(ys, is.point.y);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const LatticeIndex node = is.patch[i * 3 + j];
                const cdouble w =
                    bc.alpha * (bx.deriv[i] * by.value[j] * is.normal.x +
                                bx.value[i] * by.deriv[j] * is.normal.y) +
                    bc.beta * (bx.value[i] * by.value[j]);
                auto gm = cut.gamma_minus_index.find(node);
                if (gm != cut.gamma_minus_index.end()) {
                    out.minus_rows[r].push_back({gm->second, w});
                    continue;
                }
                auto gp = cut.gamma_plus_aug_index.find(node);
                if (gp == cut.gamma_plus_aug_index.end())
                    throw std::logic_error(
                        "assemble_phi: patch node in neither gamma_- nor augmented gamma_+ "
                        "(cut-cell construction contract violated)");
                out.plus_rows[r].push_back({gp->second, w});
            }
        }
        out.rhs[r] = bc.g(is.point, is.normal);
    }
    return out;
}

}  // namespace ulgf::closure
