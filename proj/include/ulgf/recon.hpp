#ifndef ULGF_RECON_HPP
#define ULGF_RECON_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "ulgf/analytic.hpp"
#include "ulgf/bae.hpp"

namespace ulgf::recon {

/// Rectangle of lattice nodes [i0, i0+nx) x [j0, j0+ny).
struct Region {
    int i0 = 0;
    int j0 = 0;
    int nx = 0;
    int ny = 0;

    size_t count() const { return (size_t)nx * ny; }
    bool contains(LatticeIndex p) const {
        return p.m >= i0 && p.m < i0 + nx && p.n >= j0 && p.n < j0 + ny;
    }
};

enum class FieldKind { scattered, total };

/// Complex field samples over a rectangular lattice region, row-major by
/// y then x (value(i, j) = values[(j - j0) nx + (i - i0)]). The mask marks
/// exterior nodes 1 and interior nodes 0.
struct FieldGrid {
    Region region;
    double h = 0.0;
    Point2 origin;
    FieldKind kind = FieldKind::scattered;
    std::vector<cdouble> values;
    std::vector<uint8_t> mask;

    cdouble at(int i, int j) const {
        return values[(size_t)(j - region.j0) * region.nx + (i - region.i0)];
    }
    uint8_t mask_at(int i, int j) const {
        return mask[(size_t)(j - region.j0) * region.nx + (i - region.i0)];
    }
};

struct ReconReport {
    bool fft_route = false;
    bool resonance_fallback = false;
    std::string note;
};

/// Dense convolution u_s = sum K(s, t) q_t at every region node.
FieldGrid evaluate_field_direct(const bae::Kernel& kernel, const lgf::LgfTable& table,
                                const geometry::CutGeometry& cut, const bae::LayerDensity& q,
                                const Region& region);

/// Convolution on the region boundary ring only, then a fast-sine-transform
/// interior solve of [Au] = rho with the convolved ring as Dirichlet data.
/// rho carries the layer sources inside the region: the density itself at
/// gamma_- nodes for the single layer, the dipole pattern (+|E_t| q_t at t,
/// -q_t at each E-neighbor) for the double layer, and their eta-combination
/// for the combined kernel. Equals the direct route up to transform
/// roundoff; falls back to the direct route (flagged in the report) when a
/// region eigenvalue is within 1e-10 of resonance.
FieldGrid reconstruct_fft(const bae::Kernel& kernel, const lgf::LgfTable& table,
                          const geometry::CutGeometry& cut, const bae::LayerDensity& q,
                          const Region& region, ReconReport* report = nullptr);

/// total = scattered + incident on exterior nodes; interior nodes are
/// zeroed and flagged in the mask.
FieldGrid total_field(const FieldGrid& scattered, const analytic::IncidentWave& wave,
                      const geometry::CutGeometry& cut);

/// CSV export, header "x,y,re,im,mask", rows y-major then x.
void write_field_csv(const FieldGrid& field, const std::filesystem::path& path);

/// Binary export: the lattice Green's function cache layout ("LGF2", u32
/// version, f64 omega2, u32 box_n == 0 sentinel) followed by a region
/// header (i32 i0, j0, nx, ny; f64 h, origin x, origin y; u8 kind), the
/// row-major complex values, then the mask bytes.
void write_field_binary(const FieldGrid& field, double omega2,
                        const std::filesystem::path& path);

}  // namespace ulgf::recon

#endif
