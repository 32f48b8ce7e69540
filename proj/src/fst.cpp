#include "ulgf/fst.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace ulgf {

namespace {
// FFTW's planner is not thread-safe; execution of a created plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

void fst2_inplace(std::vector<cdouble>& a, int nx, int ny) {
    if (nx <= 0 || ny <= 0 || (size_t)nx * (size_t)ny != a.size())
        throw std::invalid_argument("fst2_inplace: dimension mismatch");
    std::vector<double> re((size_t)nx * ny), im((size_t)nx * ny);
    for (size_t i = 0; i < a.size(); ++i) {
        re[i] = a[i].real();
        im[i] = a[i].imag();
    }
    fftw_plan pre, pim;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        pre = fftw_plan_r2r_2d(nx, ny, re.data(), re.data(), FFTW_RODFT00, FFTW_RODFT00,
                               FFTW_ESTIMATE);
        pim = fftw_plan_r2r_2d(nx, ny, im.data(), im.data(), FFTW_RODFT00, FFTW_RODFT00,
                               FFTW_ESTIMATE);
    }
    fftw_execute(pre);
    fftw_execute(pim);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(pre);
        fftw_destroy_plan(pim);
    }
    for (size_t i = 0; i < a.size(); ++i) a[i] = {re[i], im[i]};
}

double fst_shift_eigenvalue(int p, int n) {
    return 2.0 * std::cos(M_PI * (double)p / (double)(n + 1));
}

}  // namespace ulgf
