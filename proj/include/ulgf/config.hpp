#ifndef ULGF_CONFIG_HPP
#define ULGF_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "ulgf/analytic.hpp"
#include "ulgf/bae.hpp"
#include "ulgf/geometry.hpp"
#include "ulgf/recon.hpp"

namespace ulgf::config {

using json = nlohmann::json;

enum class SolveStrategy { density, schur };

struct BoundarySpec {
    std::optional<analytic::Polarization> polarization;  // TM/TE shortcut
    cdouble alpha{0.0, 0.0};                             // explicit Robin pair otherwise
    cdouble beta{0.0, 0.0};
};

struct OutputSpec {
    std::filesystem::path field_csv = "field.csv";
    std::filesystem::path report = "solve_report.txt";
    std::optional<std::filesystem::path> total_csv;
    std::optional<std::filesystem::path> density_csv;
    std::optional<std::filesystem::path> field_binary;
};

struct ProblemConfig {
    geometry::Shape shape{geometry::Circle{{0.0, 0.0}, 0.5}};
    double wavenumber = 10.0;
    Vec2 direction{1.0, 0.0};
    BoundarySpec boundary;
    double box_xmin = -1.6, box_xmax = 1.6, box_ymin = -1.6, box_ymax = 1.6;
    int grid_n = 256;  // intervals per side, h = span / grid_n
    bae::Kernel kernel = bae::Kernel::single();
    bae::GmresParams gmres;
    double target_xmin = -1.5, target_xmax = 1.5, target_ymin = -1.5, target_ymax = 1.5;
    std::optional<int> lgf_box_n;  // autodetected when absent
    std::optional<std::filesystem::path> cache_dir;
    OutputSpec output;
    SolveStrategy strategy = SolveStrategy::density;

    double h() const { return (box_xmax - box_xmin) / grid_n; }
    double omega2() const { return wavenumber * wavenumber * h() * h(); }
    double points_per_wavelength() const { return 2.0 * M_PI / (wavenumber * h()); }
    geometry::GridSpec grid() const;

    /// cache_dir > ULGF_CACHE_DIR environment variable > ./lgf-cache
    std::filesystem::path resolved_cache_dir() const;
};

/// Parses a strict-schema JSON document: unknown keys anywhere are hard
/// ConfigErrors, as are non-unit directions, non-square boxes, odd grid_n,
/// and fewer than 4 points per wavelength.
ProblemConfig parse_config(const json& j);
ProblemConfig load_config(const std::filesystem::path& path);

json serialize_config(const ProblemConfig& config);

}  // namespace ulgf::config

#endif
