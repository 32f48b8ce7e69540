#include "ulgf/lgf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>

#include "ulgf/fst.hpp"
#include "ulgf/specfun.hpp"

namespace ulgf::lgf {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod 7-15 on [a, b] for a complex integrand.
// ---------------------------------------------------------------------------

constexpr double kGk15Nodes[8] = {
    0.000000000000000000000000000000000e+00, 2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01, 5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01, 8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01, 9.914553711208126392068546975263285e-01};
constexpr double kGk15WK[8] = {
    2.094821410847278280129991748917143e-01, 2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01, 1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01, 1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02, 2.293532201052922496373200805896959e-02};
constexpr double kGk7WG[4] = {
    4.179591836734693877551020408163265e-01, 3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01, 1.294849661688696932706114326790820e-01};

struct GkResult {
    cdouble value;
    double error;
};

template <class F>
GkResult gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hh = 0.5 * (b - a);
    cdouble fv[15];
    fv[7] = f(c);
    for (int i = 0; i < 7; ++i) {
        const double dx = hh * kGk15Nodes[7 - i];  // order nodes outward
        fv[i] = f(c - dx);
        fv[14 - i] = f(c + dx);
    }
    cdouble resk = kGk15WK[0] * fv[7];
    cdouble resg = kGk7WG[0] * fv[7];
    for (int i = 1; i < 8; ++i) {
        const cdouble pair = fv[7 - i] + fv[7 + i];
        resk += kGk15WK[i] * pair;
        if (i % 2 == 0) resg += kGk7WG[i / 2] * pair;
    }
    resk *= hh;
    resg *= hh;
    return {resk, std::abs(resk - resg)};
}

template <class F>
cdouble adaptive_gk(F&& f, double a, double b, double abs_tol, int max_panels = 200000) {
    struct Panel {
        double a, b;
        cdouble v;
        double e;
    };
    std::vector<Panel> heap;
    GkResult first = gk15(f, a, b);
    heap.push_back({a, b, first.value, first.error});
    cdouble total = first.value;
    double err = first.error;
    auto cmp = [](const Panel& x, const Panel& y) { return x.e < y.e; };
    std::make_heap(heap.begin(), heap.end(), cmp);
    int panels = 1;
    while (err > abs_tol && panels < max_panels) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Panel worst = heap.back();
        heap.pop_back();
        const double m = 0.5 * (worst.a + worst.b);
        if (m <= worst.a || m >= worst.b) {  // interval exhausted by rounding
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), cmp);
            break;
        }
        GkResult left = gk15(f, worst.a, m);
        GkResult right = gk15(f, m, worst.b);
        total += left.value + right.value - worst.v;
        err += left.error + right.error - worst.e;
        heap.push_back({worst.a, m, left.value, left.error});
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back({m, worst.b, right.value, right.error});
        std::push_heap(heap.begin(), heap.end(), cmp);
        ++panels;
        if (panels % 512 == 0) {  // refresh accumulated error estimate
            err = 0.0;
            for (const Panel& p : heap) err += p.e;
        }
    }
    if (err > std::max(1e-8, 100 * abs_tol))
        throw ConvergenceError("adaptive_gk: quadrature failed to converge");
    return total;
}

// ---------------------------------------------------------------------------
// Exact spectral integrand at eps = 0.
// ---------------------------------------------------------------------------

// (1/2pi) int e^{i m2 xi2} / (2 cos xi2 + c) d xi2 at c = omega2-4+2cos(xi1),
// limiting-absorption branch.
cdouble inner_closed_form(double c, int m2) {
    if (c < -2.0) {
        const double s = std::sqrt(c * c - 4.0);
        const double beta = 0.5 * (-c - s);  // in (0,1)
        return cdouble{std::pow(beta, m2) / (-s), 0.0};
    }
    if (c > 2.0) {
        const double s = std::sqrt(c * c - 4.0);
        const double beta = 0.5 * (-c + s);  // in (-1,0)
        return cdouble{std::pow(beta, m2) / s, 0.0};
    }
    // propagating band: beta = e^{i theta}, theta in (0, pi) selected by
    // Im(omega2 (1+i eps)^2) > 0 as eps -> 0+
    const double theta = std::acos(-0.5 * c);
    const double s2 = 2.0 * std::sin(theta);
    return {std::sin(m2 * theta) / s2, -std::cos(m2 * theta) / s2};
}

// Band-edge locations of c(xi) = omega2 - 4 + 2 cos(xi) crossing +-2.
std::vector<double> band_cuts(double omega2) {
    std::vector<double> cuts{0.0, kPi};
    const double lo = 1.0 - 0.5 * omega2;   // c = -2
    const double hi = 3.0 - 0.5 * omega2;   // c = +2
    if (lo > -1.0 && lo < 1.0) cuts.push_back(std::acos(lo));
    if (hi > -1.0 && hi < 1.0) cuts.push_back(std::acos(hi));
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

}  // namespace

cdouble lgf_point_integral(double omega2, int m1, int m2) {
    if (!(omega2 > 0.0) || omega2 == 4.0)
        throw std::domain_error("lgf_point_integral: omega2 must be > 0 and != 4");
    int a1 = std::abs(m1), a2 = std::abs(m2);
    if (a1 < a2) std::swap(a1, a2);
    const std::vector<double> cuts = band_cuts(omega2);
    const double tol = 1e-12;
    cdouble total{0.0, 0.0};
    for (size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double a = cuts[seg], b = cuts[seg + 1];
        const double mid = 0.5 * (a + b);
        // xi = end -+ u^2 removes the 1/sqrt band-edge singularity
        auto piece = [&](double end, double sgn, double len) {
            auto g = [&](double u) {
                const double xi = end + sgn * u * u;
                const double c = omega2 - 4.0 + 2.0 * std::cos(xi);
                return inner_closed_form(c, a2) * (std::cos(a1 * xi) * 2.0 * u);
            };
            return adaptive_gk(g, 0.0, std::sqrt(len), tol);
        };
        total += piece(a, +1.0, mid - a);
        total += piece(b, -1.0, b - mid);
    }
    return total / kPi;
}

// ---------------------------------------------------------------------------
// LgfTable
// ---------------------------------------------------------------------------

LgfTable::LgfTable(double omega2, int box_n, std::vector<cdouble> quadrant)
    : omega2_(omega2), box_n_(box_n), vals_(std::move(quadrant)) {
    const size_t w = (size_t)box_n_ + 1;
    if (vals_.size() != w * w) throw std::invalid_argument("LgfTable: quadrant size mismatch");
    // enforce exact symmetry under index swap
    for (size_t i = 0; i < w; ++i)
        for (size_t j = 0; j < i; ++j) vals_[j * w + i] = vals_[i * w + j];
}

cdouble LgfTable::at(int m1, int m2) const {
    const int a1 = std::abs(m1), a2 = std::abs(m2);
    if (a1 > box_n_ || a2 > box_n_) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "lgf_at: offset (%d,%d) outside table; requires box_n >= %d, have %d", m1,
                      m2, std::max(a1, a2), box_n_);
        throw std::out_of_range(msg);
    }
    return vals_[(size_t)a1 * (box_n_ + 1) + a2];
}

LgfTable compute_lgf_table(double omega2, int box_n, LgfBoundaryData data) {
    if (!(omega2 > 0.0)) throw std::invalid_argument("compute_lgf_table: omega2 must be > 0");
    if (omega2 == 4.0)
        throw std::invalid_argument(
            "compute_lgf_table: omega2 == 4 is the ring-solution regime; nudge h so that "
            "(k h)^2 != 4");
    if (box_n < 200) throw std::invalid_argument("compute_lgf_table: box_n must be >= 200");

    const int N = box_n;
    const int n = 2 * N + 1;

    // ring data G(N+1, j), j = 0..N
    std::vector<cdouble> ring((size_t)N + 1);
    if (data == LgfBoundaryData::exact) {
        for (int j = 0; j <= N; ++j) ring[j] = lgf_point_integral(omega2, N + 1, j);
    } else {
        const double om = std::sqrt(omega2);
        for (int j = 0; j <= N; ++j) {
            const double r = std::sqrt((double)(N + 1) * (N + 1) + (double)j * j);
            // continuum outgoing free-space data -(i/4) H0^(1)(omega r)
            ring[j] = cdouble{0.0, -0.25} * specfun::hankel1(0, om * r);
        }
    }

    // rhs = delta - lifted ring data on the four edges
    std::vector<cdouble> rhs((size_t)n * n, cdouble{0.0, 0.0});
    auto idx = [n, N](int i, int j) { return (size_t)(i + N) * n + (j + N); };
    rhs[idx(0, 0)] = 1.0;
    for (int t = -N; t <= N; ++t) {
        const cdouble b = ring[std::abs(t)];
        rhs[idx(t, N)] -= b;
        rhs[idx(t, -N)] -= b;
        rhs[idx(N, t)] -= b;
        rhs[idx(-N, t)] -= b;
    }

    fst2_inplace(rhs, n, n);
    double min_lam = std::numeric_limits<double>::max();
    std::vector<double> lam1(n);
    for (int p = 1; p <= n; ++p) lam1[p - 1] = fst_shift_eigenvalue(p, n);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            const double lam = lam1[p] + lam1[q] + omega2 - 4.0;
            min_lam = std::min(min_lam, std::abs(lam));
            rhs[(size_t)p * n + q] /= lam;
        }
    }
    if (min_lam < 1e-10) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "compute_lgf_table: near-resonant box eigenvalue (|lambda|=%.3e); retry "
                      "with box_n = %d",
                      min_lam, box_n + 1);
        throw ResonanceError(msg);
    }
    fst2_inplace(rhs, n, n);
    const double scale = 1.0 / (4.0 * (double)(N + 1) * (N + 1));
    std::vector<cdouble> quad(((size_t)N + 1) * (N + 1));
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j) quad[(size_t)i * (N + 1) + j] = rhs[idx(i, j)] * scale;
    return LgfTable(omega2, N, std::move(quad));
}

// ---------------------------------------------------------------------------
// Limiting-absorption quadrature oracle (test path, independent of the
// production integral: smooth absorbed integrand + adaptive Simpson +
// Richardson extrapolation).
// ---------------------------------------------------------------------------

namespace {

cdouble oracle_integrand(double omega2, double eps, int m1, int m2, double xi) {
    const cdouble w = omega2 * (cdouble{1.0, eps} * cdouble{1.0, eps}) - 4.0;
    const cdouble c = w + 2.0 * std::cos(xi);
    const cdouble s = std::sqrt(c * c - 4.0);
    const cdouble r1 = 0.5 * (-c + s);
    const cdouble r2 = 0.5 * (-c - s);
    cdouble beta, diff;
    if (std::abs(r1) < std::abs(r2)) {
        beta = r1;
        diff = r1 - r2;
    } else {
        beta = r2;
        diff = r2 - r1;
    }
    return std::pow(beta, m2) / diff * std::cos(m1 * xi);
}

template <class F>
cdouble adaptive_simpson_rec(F&& f, double a, double b, cdouble fa, cdouble fm, cdouble fb,
                             cdouble whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cdouble flm = f(lm), frm = f(rm);
    const cdouble left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cdouble right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const cdouble delta = left + right - whole;
    if (depth <= 0) throw ConvergenceError("oracle quadrature: recursion depth exhausted");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
cdouble adaptive_simpson(F&& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const cdouble fa = f(a), fm = f(m), fb = f(b);
    const cdouble whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

cdouble lgf_quadrature_oracle(double omega2, int m1, int m2, double eps) {
    if (!(omega2 > 0.0)) throw std::domain_error("lgf_quadrature_oracle: omega2 must be > 0");
    if (!(eps > 0.0)) throw std::domain_error("lgf_quadrature_oracle: eps must be > 0");
    int a1 = std::abs(m1), a2 = std::abs(m2);
    if (a1 < a2) std::swap(a1, a2);
    if (a1 > 20)
        throw std::invalid_argument("lgf_quadrature_oracle: |m| <= 20 (cost grows with oscillation)");

    constexpr int kLevels = 4;
    double es[kLevels];
    cdouble vals[kLevels];
    for (int j = 0; j < kLevels; ++j) {
        es[j] = eps / double(1 << j);
        auto f = [&](double xi) { return oracle_integrand(omega2, es[j], a1, a2, xi); };
        vals[j] = adaptive_simpson(f, 0.0, kPi, 1e-13) / kPi;
    }
    // Neville extrapolation to eps = 0
    cdouble t[kLevels][kLevels];
    for (int j = 0; j < kLevels; ++j) t[0][j] = vals[j];
    for (int k = 1; k < kLevels; ++k)
        for (int j = 0; j + k < kLevels; ++j)
            t[k][j] = (es[j] * t[k - 1][j + 1] - es[j + k] * t[k - 1][j]) / (es[j] - es[j + k]);
    const cdouble fine = t[kLevels - 1][0];
    const cdouble prev = t[kLevels - 2][1];
    if (std::abs(fine - prev) > 1e-7)
        throw ConvergenceError("lgf_quadrature_oracle: eps-extrapolation did not converge");
    return fine;
}

double ring_solution_check(int box_n) {
    if (box_n < 3) throw std::invalid_argument("ring_solution_check: box_n must be >= 3");
    auto u = [](int m1, int m2) {
        const int ring = std::max(std::abs(m1), std::abs(m2));
        return (ring % 2 == 0) ? -0.25 : 0.25;
    };
    const StencilOperator op{4.0};
    double worst = 0.0;
    for (int i = -(box_n - 1); i <= box_n - 1; ++i) {
        for (int j = -(box_n - 1); j <= box_n - 1; ++j) {
            const double delta = (i == 0 && j == 0) ? 1.0 : 0.0;
            const double r = std::abs(op.apply(u, i, j).real() - delta);
            worst = std::max(worst, r);
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Cache file
// ---------------------------------------------------------------------------

namespace {
constexpr char kMagic[4] = {'L', 'G', 'F', '2'};
constexpr uint32_t kVersion = 1;
}  // namespace

void save_lgf_cache(const LgfTable& table, const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("save_lgf_cache: cannot open " + tmp.string());
        out.write(kMagic, 4);
        const uint32_t ver = kVersion;
        out.write(reinterpret_cast<const char*>(&ver), 4);
        const double w2 = table.omega2();
        out.write(reinterpret_cast<const char*>(&w2), 8);
        const uint32_t bn = (uint32_t)table.box_n();
        out.write(reinterpret_cast<const char*>(&bn), 4);
        out.write(reinterpret_cast<const char*>(table.quadrant().data()),
                  (std::streamsize)(table.quadrant().size() * sizeof(cdouble)));
        if (!out) throw std::runtime_error("save_lgf_cache: write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::optional<LgfTable> load_lgf_cache(const std::filesystem::path& path, double omega2,
                                       int box_n) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[4];
    uint32_t ver = 0, bn = 0;
    double w2 = 0.0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&ver), 4);
    in.read(reinterpret_cast<char*>(&w2), 8);
    in.read(reinterpret_cast<char*>(&bn), 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_lgf_cache: bad magic in " + path.string());
    if (ver != kVersion)
        throw std::runtime_error("load_lgf_cache: unsupported version in " + path.string());
    if (w2 != omega2 || (int)bn != box_n)
        throw std::runtime_error("load_lgf_cache: key mismatch in " + path.string());
    const size_t count = ((size_t)bn + 1) * ((size_t)bn + 1);
    std::vector<cdouble> vals(count);
    in.read(reinterpret_cast<char*>(vals.data()), (std::streamsize)(count * sizeof(cdouble)));
    if (!in) throw std::runtime_error("load_lgf_cache: truncated payload in " + path.string());
    return LgfTable(omega2, (int)bn, std::move(vals));
}

}  // namespace ulgf::lgf
