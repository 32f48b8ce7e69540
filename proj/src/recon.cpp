#include "ulgf/recon.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ulgf/fst.hpp"

namespace ulgf::recon {

namespace {

std::vector<uint8_t> region_mask(const geometry::CutGeometry& cut, const Region& region) {
    std::vector<uint8_t> mask(region.count(), 1);
    for (int j = 0; j < region.ny; ++j)
        for (int i = 0; i < region.nx; ++i) {
            const Point2 p = cut.grid.node(region.i0 + i, region.j0 + j);
            if (cut.shape->signed_distance(p) < 0.0) mask[(size_t)j * region.nx + i] = 0;
        }
    return mask;
}

std::vector<LatticeIndex> region_nodes(const Region& region) {
    std::vector<LatticeIndex> nodes;
    nodes.reserve(region.count());
    for (int j = 0; j < region.ny; ++j)
        for (int i = 0; i < region.nx; ++i) nodes.push_back({region.i0 + i, region.j0 + j});
    return nodes;
}

double resolved_eta(const bae::Kernel& kernel, double omega2) {
    if (kernel.kind != bae::KernelKind::combined) return 0.0;
    if (kernel.eta > 0.0) return kernel.eta;
    return std::max(1.0, std::sqrt(omega2));
}

}  // namespace

FieldGrid evaluate_field_direct(const bae::Kernel& kernel, const lgf::LgfTable& table,
                                const geometry::CutGeometry& cut, const bae::LayerDensity& q,
                                const Region& region) {
    if (region.nx <= 0 || region.ny <= 0)
        throw std::invalid_argument("evaluate_field_direct: empty region");
    FieldGrid out;
    out.region = region;
    out.h = cut.grid.h;
    out.origin = cut.grid.origin;
    out.kind = FieldKind::scattered;
    out.values = bae::apply_kernel(kernel, table, cut, region_nodes(region), q.q);
    out.mask = region_mask(cut, region);
    return out;
}

FieldGrid reconstruct_fft(const bae::Kernel& kernel, const lgf::LgfTable& table,
                          const geometry::CutGeometry& cut, const bae::LayerDensity& q,
                          const Region& region, ReconReport* report) {
    ReconReport local;
    ReconReport& rep = report ? *report : local;
    const int nx = region.nx, ny = region.ny;
    if (nx <= 0 || ny <= 0) throw std::invalid_argument("reconstruct_fft: empty region");
    const int ix = nx - 2, iy = ny - 2;  // interior size
    if (ix < 1 || iy < 1) {
        rep.fft_route = false;
        rep.note = "region too small for an interior solve; direct evaluation";
        return evaluate_field_direct(kernel, table, cut, q, region);
    }

    // resonance guard on the interior Dirichlet eigenvalues
    const double w2 = table.omega2();
    double min_lam = std::numeric_limits<double>::max();
    for (int p = 1; p <= ix; ++p) {
        const double lx = fst_shift_eigenvalue(p, ix + 1);
        for (int qy = 1; qy <= iy; ++qy)
            min_lam =
                std::min(min_lam, std::abs(lx + fst_shift_eigenvalue(qy, iy + 1) + w2 - 4.0));
    }
    if (min_lam < 1e-10) {
        rep.fft_route = false;
        rep.resonance_fallback = true;
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "interior eigenvalue %.3e within guard; direct evaluation", min_lam);
        rep.note = buf;
        return evaluate_field_direct(kernel, table, cut, q, region);
    }
    rep.fft_route = true;

    // boundary ring of the region by direct convolution
    std::vector<LatticeIndex> ring;
    ring.reserve(2 * (size_t)(nx + ny));
    for (int i = 0; i < nx; ++i) {
        ring.push_back({region.i0 + i, region.j0});
        ring.push_back({region.i0 + i, region.j0 + ny - 1});
    }
    for (int j = 1; j < ny - 1; ++j) {
        ring.push_back({region.i0, region.j0 + j});
        ring.push_back({region.i0 + nx - 1, region.j0 + j});
    }
    const std::vector<cdouble> ring_vals = bae::apply_kernel(kernel, table, cut, ring, q.q);

    FieldGrid out;
    out.region = region;
    out.h = cut.grid.h;
    out.origin = cut.grid.origin;
    out.kind = FieldKind::scattered;
    out.values.assign(region.count(), cdouble{0.0, 0.0});
    auto val = [&](int i, int j) -> cdouble& {
        return out.values[(size_t)(j - region.j0) * nx + (i - region.i0)];
    };
    for (size_t r = 0; r < ring.size(); ++r) val(ring[r].m, ring[r].n) = ring_vals[r];

    // interior source rho: [Au] = rho for the layer representation
    std::vector<cdouble> rhs((size_t)ix * iy, cdouble{0.0, 0.0});
    auto rhs_at = [&](LatticeIndex p) -> cdouble* {
        const int ii = p.m - (region.i0 + 1), jj = p.n - (region.j0 + 1);
        if (ii < 0 || ii >= ix || jj < 0 || jj >= iy) return nullptr;
        return &rhs[(size_t)ii * iy + jj];
    };
    const double eta = resolved_eta(kernel, w2);
    for (size_t t = 0; t < cut.gamma_minus.size(); ++t) {
        const LatticeIndex tt = cut.gamma_minus[t];
        const cdouble qt = q.q[t];
        cdouble at_t{0.0, 0.0};
        if (kernel.kind == bae::KernelKind::single) {
            at_t = qt;
        } else {
            at_t = (double)cut.e_neighbors[t].size() * qt;
            if (kernel.kind == bae::KernelKind::combined) at_t -= cdouble{0.0, eta} * qt;
            for (const LatticeIndex& r : cut.e_neighbors[t])
                if (cdouble* slot = rhs_at(r)) *slot -= qt;
        }
        if (cdouble* slot = rhs_at(tt)) *slot += at_t;
    }
    // lift the Dirichlet ring into the right-hand side
    for (int jj = 0; jj < iy; ++jj) {
        const int j = region.j0 + 1 + jj;
        rhs[(size_t)0 * iy + jj] -= val(region.i0, j);
        rhs[(size_t)(ix - 1) * iy + jj] -= val(region.i0 + nx - 1, j);
    }
    for (int ii = 0; ii < ix; ++ii) {
        const int i = region.i0 + 1 + ii;
        rhs[(size_t)ii * iy + 0] -= val(i, region.j0);
        rhs[(size_t)ii * iy + (iy - 1)] -= val(i, region.j0 + ny - 1);
    }

    fst2_inplace(rhs, ix, iy);
    for (int p = 0; p < ix; ++p) {
        const double lx = fst_shift_eigenvalue(p + 1, ix + 1);
        for (int qy = 0; qy < iy; ++qy)
            rhs[(size_t)p * iy + qy] /= lx + fst_shift_eigenvalue(qy + 1, iy + 1) + w2 - 4.0;
    }
    fst2_inplace(rhs, ix, iy);
    const double scale = 1.0 / (4.0 * (double)(ix + 1) * (iy + 1));
    for (int ii = 0; ii < ix; ++ii)
        for (int jj = 0; jj < iy; ++jj)
            val(region.i0 + 1 + ii, region.j0 + 1 + jj) = rhs[(size_t)ii * iy + jj] * scale;

    out.mask = region_mask(cut, region);
    return out;
}

FieldGrid total_field(const FieldGrid& scattered, const analytic::IncidentWave& wave,
                      const geometry::CutGeometry& cut) {
    if (scattered.kind != FieldKind::scattered)
        throw std::invalid_argument("total_field: input must be a scattered field");
    FieldGrid out = scattered;
    out.kind = FieldKind::total;
    for (int j = 0; j < out.region.ny; ++j) {
        for (int i = 0; i < out.region.nx; ++i) {
            const size_t idx = (size_t)j * out.region.nx + i;
            if (out.mask[idx]) {
                const Point2 p = cut.grid.node(out.region.i0 + i, out.region.j0 + j);
                out.values[idx] += analytic::plane_wave(wave, p);
            } else {
                out.values[idx] = {0.0, 0.0};  // inside the conductor
            }
        }
    }
    return out;
}

void write_field_csv(const FieldGrid& field, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("write_field_csv: cannot open " + path.string());
    out << "x,y,re,im,mask\n";
    char line[160];
    for (int j = 0; j < field.region.ny; ++j) {
        for (int i = 0; i < field.region.nx; ++i) {
            const size_t idx = (size_t)j * field.region.nx + i;
            const double x = field.origin.x + (field.region.i0 + i) * field.h;
            const double y = field.origin.y + (field.region.j0 + j) * field.h;
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%d\n", x, y,
                          field.values[idx].real(), field.values[idx].imag(),
                          (int)field.mask[idx]);
            out << line;
        }
    }
}

void write_field_binary(const FieldGrid& field, double omega2,
                        const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_field_binary: cannot open " + path.string());
    out.write("LGF2", 4);
    const uint32_t ver = 1;
    out.write(reinterpret_cast<const char*>(&ver), 4);
    out.write(reinterpret_cast<const char*>(&omega2), 8);
    const uint32_t sentinel = 0;  // distinguishes field files from table caches
    out.write(reinterpret_cast<const char*>(&sentinel), 4);
    const int32_t hdr[4] = {field.region.i0, field.region.j0, field.region.nx, field.region.ny};
    out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    out.write(reinterpret_cast<const char*>(&field.h), 8);
    out.write(reinterpret_cast<const char*>(&field.origin.x), 8);
    out.write(reinterpret_cast<const char*>(&field.origin.y), 8);
    const uint8_t kind = field.kind == FieldKind::total ? 1 : 0;
    out.write(reinterpret_cast<const char*>(&kind), 1);
    out.write(reinterpret_cast<const char*>(field.values.data()),
              (std::streamsize)(field.values.size() * sizeof(cdouble)));
    out.write(reinterpret_cast<const char*>(field.mask.data()),
              (std::streamsize)field.mask.size());
    if (!out) throw std::runtime_error("write_field_binary: write failed for " + path.string());
}

}  // namespace ulgf::recon
