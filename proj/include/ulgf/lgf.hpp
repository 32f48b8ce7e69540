#ifndef ULGF_LGF_HPP
#define ULGF_LGF_HPP

#include <filesystem>
#include <optional>
#include <vector>

#include "ulgf/common.hpp"

namespace ulgf::lgf {

/// The 5-point difference Helmholtz operator
///   [Au](m1,m2) = u(m1+1,m2) + u(m1,m2+1) + u(m1-1,m2) + u(m1,m2-1)
///                 + (omega2 - 4) u(m1,m2),
/// omega2 = (k h)^2 the lattice-scaled wavenumber.
struct StencilOperator {
    double omega2;

    template <class F>
    cdouble apply(F&& u, int m1, int m2) const {
        return u(m1 + 1, m2) + u(m1, m2 + 1) + u(m1 - 1, m2) + u(m1, m2 - 1) +
               (omega2 - 4.0) * u(m1, m2);
    }
};

/// Cached quadrant of lattice Green's function values for one omega2.
/// Stores 0 <= m1, m2 <= box_n row-major; values are symmetrized at
/// construction so G(m1,m2) == G(m2,m1) holds exactly as accessed, and
/// the accessor folds signs via evenness in each index.
class LgfTable {
public:
    LgfTable(double omega2, int box_n, std::vector<cdouble> quadrant);

    double omega2() const { return omega2_; }
    int box_n() const { return box_n_; }

    /// G(|m1|, |m2|); throws std::out_of_range naming the required box_n
    /// when the offset exceeds the table.
    cdouble at(int m1, int m2) const;

    const std::vector<cdouble>& quadrant() const { return vals_; }

private:
    double omega2_;
    int box_n_;
    std::vector<cdouble> vals_;  // (box_n+1)^2, row-major in m1
};

/// Pure lookup wrapper, G(|m1|,|m2|) with index swap to the stored triangle.
inline cdouble lgf_at(const LgfTable& table, int m1, int m2) { return table.at(m1, m2); }

enum class LgfBoundaryData {
    exact,   ///< exact lattice Green's function on the box ring (default)
    hankel,  ///< continuum -i/4 H0^(1) data; accurate only for small omega2
};

/// Tabulate the outgoing lattice Green's function of the difference
/// Helmholtz operator by solving [Au] = delta_0 on the (2N+1)^2 box with
/// Dirichlet ring data at +-(N+1): the data is lifted into the right-hand
/// side, a 2D fast sine transform diagonalizes the operator with
/// eigenvalues 2cos(p pi/(2N+2)) + 2cos(q pi/(2N+2)) + omega2 - 4, and the
/// inverse transform yields the table.
///
/// With LgfBoundaryData::exact the ring values are evaluated by the
/// semi-analytic spectral integral (lgf_point_integral), which makes the
/// whole table accurate to ~1e-10 at any omega2 in (0,8). The hankel mode
/// uses the continuum free-space data instead; its error grows with the
/// lattice dispersion drift ~ omega^3 N / 24 and is only serviceable for
/// small omega2.
///
/// Throws ResonanceError when min |lambda_pq| < 1e-10 (retry with
/// box_n + 1), std::invalid_argument for omega2 <= 0, omega2 == 4, or
/// box_n < 200.
LgfTable compute_lgf_table(double omega2, int box_n,
                           LgfBoundaryData data = LgfBoundaryData::exact);

/// Exact lattice Green's function at a single offset, by reducing the
/// defining double integral to one dimension: the inner integral is summed
/// in closed form by residues (geometric decay beta^|m2| with |beta| < 1,
/// or |beta| = 1 on the propagating band where the limiting-absorption
/// branch picks theta in (0, pi)); the outer integral is split at the band
/// edges, the inverse-square-root endpoint singularities are removed by a
/// quadratic substitution, and each piece is integrated by adaptive
/// Gauss-Kronrod. Valid for omega2 in (0,8) \ {4}.
cdouble lgf_point_integral(double omega2, int m1, int m2);

/// Independent test oracle: evaluates the same double integral with
/// explicit limiting absorption omega2 (1 + i eps)^2 (outgoing branch,
/// Im > 0) at eps, eps/2, eps/4, eps/8, each by adaptive Simpson
/// quadrature of the smooth absorbed integrand, then Richardson-
/// extrapolates eps -> 0. Throws ConvergenceError if the two finest
/// extrapolants differ by more than 1e-7.
cdouble lgf_quadrature_oracle(double omega2, int m1, int m2, double eps);

/// Residual max |[Au] - delta_0| of the alternating-ring particular
/// solution u(m) = -(1/4)(-1)^{max(|m1|,|m2|)} at omega2 = 4, over every
/// node of the (2 box_n + 1)^2 box with a full interior stencil. Exact
/// cancellation makes this zero to machine precision.
double ring_solution_check(int box_n);

/// Binary cache, little-endian: magic "LGF2", u32 version (=1), f64 omega2,
/// u32 box_n, then (box_n+1)^2 complex f64 row-major quadrant values.
/// Writes are atomic (temp file + rename).
void save_lgf_cache(const LgfTable& table, const std::filesystem::path& path);

/// Loads and validates a cache file; std::nullopt if the file does not
/// exist, std::runtime_error on bad magic/version or key mismatch.
std::optional<LgfTable> load_lgf_cache(const std::filesystem::path& path, double omega2,
                                       int box_n);

}  // namespace ulgf::lgf

#endif
