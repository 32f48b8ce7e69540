#include "ulgf/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

namespace ulgf::config {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& ctx) {
    if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(ctx + ": unknown key \"" + it.key() + "\"");
}

const json& require(const json& j, const std::string& key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(ctx + ": missing required key \"" + key + "\"");
    return *it;
}

Point2 parse_point(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(ctx + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

cdouble parse_complex(const json& j, const std::string& ctx) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(ctx + ": expected a number or [re, im]");
}

geometry::Shape parse_shape(const json& j, const std::string& ctx) {
    const std::string type = require(j, "type", ctx).get<std::string>();
    if (type == "circle") {
        check_keys(j, {"type", "center", "radius"}, ctx);
        const double r = require(j, "radius", ctx).get<double>();
        if (!(r > 0.0)) throw ConfigError(ctx + ": radius must be > 0");
        return geometry::Circle{parse_point(require(j, "center", ctx), ctx), r};
    }
    if (type == "polygon") {
        check_keys(j, {"type", "vertices"}, ctx);
        const json& verts = require(j, "vertices", ctx);
        if (!verts.is_array() || verts.size() < 3)
            throw ConfigError(ctx + ": polygon needs at least 3 vertices");
        geometry::PolygonShape poly;
        for (const auto& v : verts) poly.vertices.push_back(parse_point(v, ctx));
        return poly;
    }
    if (type == "capsule") {
        check_keys(j, {"type", "a", "b", "radius"}, ctx);
        const double r = require(j, "radius", ctx).get<double>();
        if (!(r > 0.0)) throw ConfigError(ctx + ": radius must be > 0");
        return geometry::CapsuleShape{parse_point(require(j, "a", ctx), ctx),
                                      parse_point(require(j, "b", ctx), ctx), r};
    }
    if (type == "union") {
        check_keys(j, {"type", "members"}, ctx);
        const json& members = require(j, "members", ctx);
        if (!members.is_array() || members.empty())
            throw ConfigError(ctx + ": union needs at least one member");
        geometry::UnionShape u;
        for (size_t i = 0; i < members.size(); ++i)
            u.members.push_back(parse_shape(members[i], ctx + ".members[" + std::to_string(i) + "]"));
        return u;
    }
    throw ConfigError(ctx + ": unknown shape type \"" + type + "\"");
}

json serialize_shape(const geometry::Shape& s) {
    return s.visit([](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, geometry::Circle>) {
            return {{"type", "circle"},
                    {"center", {v.center.x, v.center.y}},
                    {"radius", v.radius}};
        } else if constexpr (std::is_same_v<T, geometry::PolygonShape>) {
            json verts = json::array();
            for (const Point2& p : v.vertices) verts.push_back({p.x, p.y});
            return {{"type", "polygon"}, {"vertices", verts}};
        } else if constexpr (std::is_same_v<T, geometry::CapsuleShape>) {
            return {{"type", "capsule"},
                    {"a", {v.a.x, v.a.y}},
                    {"b", {v.b.x, v.b.y}},
                    {"radius", v.radius}};
        } else {
            json members = json::array();
            for (const geometry::Shape& m : v.members) members.push_back(serialize_shape(m));
            return {{"type", "union"}, {"members", members}};
        }
    });
}

}  // namespace

geometry::GridSpec ProblemConfig::grid() const {
    geometry::GridSpec g;
    g.h = h();
    g.origin = {0.5 * (box_xmin + box_xmax), 0.5 * (box_ymin + box_ymax)};
    g.extent_x = grid_n / 2;
    g.extent_y = grid_n / 2;
    return g;
}

std::filesystem::path ProblemConfig::resolved_cache_dir() const {
    if (cache_dir) return *cache_dir;
    if (const char* env = std::getenv("ULGF_CACHE_DIR")) return env;
    return "lgf-cache";
}

ProblemConfig parse_config(const json& j) {
    check_keys(j,
               {"shape", "wavenumber", "direction", "polarization", "grid", "kernel", "gmres",
                "target_region", "lgf", "output", "strategy"},
               "config");
    ProblemConfig c;
    c.shape = parse_shape(require(j, "shape", "config"), "config.shape");
    c.wavenumber = require(j, "wavenumber", "config").get<double>();
    if (!(c.wavenumber > 0.0)) throw ConfigError("config.wavenumber must be > 0");
    const Point2 d = parse_point(require(j, "direction", "config"), "config.direction");
    const double dlen = norm(d);
    if (std::abs(dlen - 1.0) > 1e-3)
        throw ConfigError("config.direction must be a unit vector");
    c.direction = {d.x / dlen, d.y / dlen};

    const json& pol = require(j, "polarization", "config");
    if (pol.is_string()) {
        const std::string p = pol.get<std::string>();
        if (p == "TM")
            c.boundary.polarization = analytic::Polarization::TM;
        else if (p == "TE")
            c.boundary.polarization = analytic::Polarization::TE;
        else
            throw ConfigError("config.polarization must be \"TM\", \"TE\", or {alpha, beta}");
    } else {
        check_keys(pol, {"alpha", "beta"}, "config.polarization");
        c.boundary.alpha = parse_complex(require(pol, "alpha", "config.polarization"),
                                         "config.polarization.alpha");
        c.boundary.beta = parse_complex(require(pol, "beta", "config.polarization"),
                                        "config.polarization.beta");
        if (c.boundary.alpha == cdouble{0.0, 0.0} && c.boundary.beta == cdouble{0.0, 0.0})
            throw ConfigError("config.polarization: alpha and beta must not both vanish");
    }

    const json& grid = require(j, "grid", "config");
    check_keys(grid, {"box", "n"}, "config.grid");
    const json& box = require(grid, "box", "config.grid");
    if (!box.is_array() || box.size() != 2)
        throw ConfigError("config.grid.box must be [[xmin,xmax],[ymin,ymax]]");
    const Point2 bx = parse_point(box[0], "config.grid.box[0]");
    const Point2 by = parse_point(box[1], "config.grid.box[1]");
    c.box_xmin = bx.x;
    c.box_xmax = bx.y;
    c.box_ymin = by.x;
    c.box_ymax = by.y;
    if (!(c.box_xmax > c.box_xmin) || !(c.box_ymax > c.box_ymin))
        throw ConfigError("config.grid.box extents must be increasing");
    if (std::abs((c.box_xmax - c.box_xmin) - (c.box_ymax - c.box_ymin)) >
        1e-12 * (c.box_xmax - c.box_xmin))
        throw ConfigError("config.grid.box must be square (one spacing h serves both axes)");
    c.grid_n = require(grid, "n", "config.grid").get<int>();
    if (c.grid_n < 8 || c.grid_n % 2 != 0)
        throw ConfigError("config.grid.n must be an even integer >= 8");

    if (auto it = j.find("kernel"); it != j.end()) {
        check_keys(*it, {"kind", "eta"}, "config.kernel");
        const std::string kind = require(*it, "kind", "config.kernel").get<std::string>();
        if (kind == "single")
            c.kernel = bae::Kernel::single();
        else if (kind == "double")
            c.kernel = bae::Kernel::dbl();
        else if (kind == "combined") {
            double eta = 0.0;
            if (auto e = it->find("eta"); e != it->end()) eta = e->get<double>();
            if (eta < 0.0) throw ConfigError("config.kernel.eta must be > 0 when given");
            c.kernel = bae::Kernel::combined(eta);
        } else
            throw ConfigError("config.kernel.kind must be single, double, or combined");
        if (kind != "combined" && it->contains("eta"))
            throw ConfigError("config.kernel.eta applies only to the combined kernel");
    }

    if (auto it = j.find("gmres"); it != j.end()) {
        check_keys(*it, {"tol", "restart", "max_iter"}, "config.gmres");
        if (it->contains("tol")) c.gmres.tol = (*it)["tol"].get<double>();
        if (it->contains("restart")) c.gmres.restart = (*it)["restart"].get<int>();
        if (it->contains("max_iter")) c.gmres.max_iter = (*it)["max_iter"].get<int>();
        if (!(c.gmres.tol > 0.0) || c.gmres.restart < 1 || c.gmres.max_iter < 1)
            throw ConfigError("config.gmres parameters out of range");
    }

    const json& region = require(j, "target_region", "config");
    check_keys(region, {"box"}, "config.target_region");
    const json& rbox = require(region, "box", "config.target_region");
    if (!rbox.is_array() || rbox.size() != 2)
        throw ConfigError("config.target_region.box must be [[xmin,xmax],[ymin,ymax]]");
    const Point2 rx = parse_point(rbox[0], "config.target_region.box[0]");
    const Point2 ry = parse_point(rbox[1], "config.target_region.box[1]");
    c.target_xmin = rx.x;
    c.target_xmax = rx.y;
    c.target_ymin = ry.x;
    c.target_ymax = ry.y;
    if (!(c.target_xmax > c.target_xmin) || !(c.target_ymax > c.target_ymin))
        throw ConfigError("config.target_region.box extents must be increasing");

    if (auto it = j.find("lgf"); it != j.end()) {
        check_keys(*it, {"box_n", "cache_dir"}, "config.lgf");
        if (it->contains("box_n")) {
            c.lgf_box_n = (*it)["box_n"].get<int>();
            if (*c.lgf_box_n < 200) throw ConfigError("config.lgf.box_n must be >= 200");
        }
        if (it->contains("cache_dir"))
            c.cache_dir = (*it)["cache_dir"].get<std::string>();
    }

    if (auto it = j.find("output"); it != j.end()) {
        check_keys(*it, {"field_csv", "report", "total_csv", "density_csv", "field_binary"},
                   "config.output");
        if (it->contains("field_csv"))
            c.output.field_csv = (*it)["field_csv"].get<std::string>();
        if (it->contains("report")) c.output.report = (*it)["report"].get<std::string>();
        if (it->contains("total_csv"))
            c.output.total_csv = (*it)["total_csv"].get<std::string>();
        if (it->contains("density_csv"))
            c.output.density_csv = (*it)["density_csv"].get<std::string>();
        if (it->contains("field_binary"))
            c.output.field_binary = (*it)["field_binary"].get<std::string>();
    }

    if (auto it = j.find("strategy"); it != j.end()) {
        const std::string s = it->get<std::string>();
        if (s == "density")
            c.strategy = SolveStrategy::density;
        else if (s == "schur")
            c.strategy = SolveStrategy::schur;
        else
            throw ConfigError("config.strategy must be density or schur");
    }

    if (c.points_per_wavelength() < 4.0)
        throw ConfigError("config: fewer than 4 points per wavelength; refine the grid");
    return c;
}

ProblemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

json serialize_config(const ProblemConfig& c) {
    json j;
    j["shape"] = serialize_shape(c.shape);
    j["wavenumber"] = c.wavenumber;
    j["direction"] = {c.direction.x, c.direction.y};
    if (c.boundary.polarization)
        j["polarization"] = *c.boundary.polarization == analytic::Polarization::TM ? "TM" : "TE";
    else
        j["polarization"] = {{"alpha", {c.boundary.alpha.real(), c.boundary.alpha.imag()}},
                             {"beta", {c.boundary.beta.real(), c.boundary.beta.imag()}}};
    j["grid"] = {{"box", {{c.box_xmin, c.box_xmax}, {c.box_ymin, c.box_ymax}}},
                 {"n", c.grid_n}};
    json kernel;
    switch (c.kernel.kind) {
        case bae::KernelKind::single: kernel["kind"] = "single"; break;
        case bae::KernelKind::dbl: kernel["kind"] = "double"; break;
        case bae::KernelKind::combined:
            kernel["kind"] = "combined";
            if (c.kernel.eta > 0.0) kernel["eta"] = c.kernel.eta;
            break;
    }
    j["kernel"] = kernel;
    j["gmres"] = {{"tol", c.gmres.tol}, {"restart", c.gmres.restart},
                  {"max_iter", c.gmres.max_iter}};
    j["target_region"] = {
        {"box", {{c.target_xmin, c.target_xmax}, {c.target_ymin, c.target_ymax}}}};
    json lgf = json::object();
    if (c.lgf_box_n) lgf["box_n"] = *c.lgf_box_n;
    if (c.cache_dir) lgf["cache_dir"] = c.cache_dir->string();
    if (!lgf.empty()) j["lgf"] = lgf;
    json output;
    output["field_csv"] = c.output.field_csv.string();
    output["report"] = c.output.report.string();
    if (c.output.total_csv) output["total_csv"] = c.output.total_csv->string();
    if (c.output.density_csv) output["density_csv"] = c.output.density_csv->string();
    if (c.output.field_binary) output["field_binary"] = c.output.field_binary->string();
    j["output"] = output;
    j["strategy"] = c.strategy == SolveStrategy::density ? "density" : "schur";
    return j;
}

}  // namespace ulgf::config
