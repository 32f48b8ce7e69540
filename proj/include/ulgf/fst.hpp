#ifndef ULGF_FST_HPP
#define ULGF_FST_HPP

#include <vector>

#include "ulgf/common.hpp"

namespace ulgf {

/// In-place 2D fast sine transform (DST-I) of an nx-by-ny complex array,
/// row-major with the second index fastest. Unnormalized: applying it twice
/// multiplies the data by 4 (nx + 1)(ny + 1). Backed by FFTW RODFT00 with
/// ESTIMATE planning so repeated runs are bit-deterministic.
void fst2_inplace(std::vector<cdouble>& a, int nx, int ny);

/// DST-I eigenvalue factor 2 cos(p pi / (n + 1)) of the 1D neighbor-shift
/// operator with zero Dirichlet closure, p = 1..n.
double fst_shift_eigenvalue(int p, int n);

}  // namespace ulgf

#endif
