#include "ulgf/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace ulgf::geometry {

namespace {

double dist_point_segment(Point2 p, Point2 a, Point2 b) {
    const Vec2 ab = b - a;
    const Vec2 ap = p - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(ap, ab) / len2, 0.0, 1.0) : 0.0;
    const Point2 proj = a + t * ab;
    return norm(p - proj);
}

// Exact Euclidean distance to the polygon boundary, sign by crossing parity.
double polygon_sdf(const PolygonShape& poly, Point2 p) {
    const auto& v = poly.vertices;
    const size_t n = v.size();
    double d = std::numeric_limits<double>::max();
    int sign = 1;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        d = std::min(d, dist_point_segment(p, v[j], v[i]));
        // crossing-parity toggle for the ray +x from p
        const bool between = (v[i].y > p.y) != (v[j].y > p.y);
        if (between) {
            const double xint =
                v[j].x + (p.y - v[j].y) / (v[i].y - v[j].y) * (v[i].x - v[j].x);
            if (p.x < xint) sign = -sign;
        }
    }
    return sign > 0 ? d : -d;  // odd crossing count means inside
}

}  // namespace

double Shape::signed_distance(Point2 p) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>) {
                return norm(p - s.center) - s.radius;
            } else if constexpr (std::is_same_v<T, PolygonShape>) {
                return polygon_sdf(s, p);
            } else if constexpr (std::is_same_v<T, CapsuleShape>) {
                return dist_point_segment(p, s.a, s.b) - s.radius;
            } else {
                double d = std::numeric_limits<double>::max();
                for (const Shape& m : s.members) d = std::min(d, m.signed_distance(p));
                return d;
            }
        },
        rep_);
}

double signed_distance(const Shape& shape, Point2 p) { return shape.signed_distance(p); }

std::vector<LatticeIndex> PointSets::m_minus() const {
    std::vector<LatticeIndex> out(interior.begin(), interior.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<LatticeIndex> PointSets::m_plus() const {
    std::vector<LatticeIndex> out;
    for (int m = -grid.extent_x; m <= grid.extent_x; ++m)
        for (int n = -grid.extent_y; n <= grid.extent_y; ++n)
            if (!interior.count({m, n})) out.push_back({m, n});
    return out;
}

namespace {
constexpr std::array<LatticeIndex, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

LatticeIndex step(LatticeIndex p, LatticeIndex d) { return {p.m + d.m, p.n + d.n}; }
}  // namespace

PointSets classify_points(const Shape& shape, const GridSpec& grid) {
    PointSets out;
    out.grid = grid;
    const double degeneracy_tol = 1e-12 * grid.h;
    for (int m = -grid.extent_x; m <= grid.extent_x; ++m) {
        for (int n = -grid.extent_y; n <= grid.extent_y; ++n) {
            const double d = shape.signed_distance(grid.node(m, n));
            if (std::abs(d) < degeneracy_tol) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "classify_points: node (%d,%d) lies on the boundary "
                              "(|sdf|=%.3e); perturb the grid origin by 1e-6 h and retry",
                              m, n, d);
                throw DegenerateNodeError(msg);
            }
            if (d < 0.0) out.interior.insert({m, n});
        }
    }
    auto is_int = [&](LatticeIndex p) { return out.interior.count(p) > 0; };
    for (int m = -grid.extent_x; m <= grid.extent_x; ++m) {
        for (int n = -grid.extent_y; n <= grid.extent_y; ++n) {
            const LatticeIndex p{m, n};
            bool any_in = false, any_out = false;
            for (auto d : kSteps) {
                if (is_int(step(p, d))) any_in = true;
                else any_out = true;
            }
            if (is_int(p) && any_out) out.gamma_minus.push_back(p);
            if (!is_int(p) && any_in) out.gamma_plus.push_back(p);
        }
    }
    std::unordered_set<LatticeIndex, LatticeIndexHash> gamma;
    gamma.insert(out.gamma_minus.begin(), out.gamma_minus.end());
    gamma.insert(out.gamma_plus.begin(), out.gamma_plus.end());
    std::unordered_set<LatticeIndex, LatticeIndexHash> e;
    for (LatticeIndex p : out.gamma_minus)
        for (auto d : kSteps) {
            const LatticeIndex q = step(p, d);
            if (!gamma.count(q) && is_int(q)) e.insert(q);
        }
    out.e_set.assign(e.begin(), e.end());
    std::sort(out.e_set.begin(), out.e_set.end());
    // gamma orderings emerge sorted from the scan, but make it explicit
    std::sort(out.gamma_minus.begin(), out.gamma_minus.end());
    std::sort(out.gamma_plus.begin(), out.gamma_plus.end());
    return out;
}

Intersection find_intersection(LatticeIndex owner, const Shape& shape, const GridSpec& grid) {
    const double tol = 1e-12 * grid.h;
    const Point2 po = grid.node(owner.m, owner.n);
    const double fo = shape.signed_distance(po);
    bool found = false;
    double best_dist = std::numeric_limits<double>::max();
    Point2 best_pt{};
    LatticeIndex best_dir{};
    for (auto d : kSteps) {
        const LatticeIndex nb = step(owner, d);
        const Point2 pn = grid.node(nb.m, nb.n);
        if (shape.signed_distance(pn) < 0.0) continue;  // neighbor not in M+
        // bisection on the segment [owner, neighbor]
        double a = 0.0, b = 1.0, fa = fo;
        Point2 pm{};
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            pm = {po.x + mid * (pn.x - po.x), po.y + mid * (pn.y - po.y)};
            const double fm = shape.signed_distance(pm);
            if (std::abs(fm) <= tol) break;
            if ((fa < 0.0) == (fm < 0.0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        const double dist = norm(pm - po);
        if (dist < best_dist) {
            best_dist = dist;
            best_pt = pm;
            best_dir = d;
            found = true;
        }
    }
    if (!found)
        throw std::logic_error("find_intersection: owner has no exterior stencil neighbor");
    const double gs = 1e-6 * grid.h;
    Vec2 nrm{(shape.signed_distance({best_pt.x + gs, best_pt.y}) -
              shape.signed_distance({best_pt.x - gs, best_pt.y})) /
                 (2.0 * gs),
             (shape.signed_distance({best_pt.x, best_pt.y + gs}) -
              shape.signed_distance({best_pt.x, best_pt.y - gs})) /
                 (2.0 * gs)};
    const double len = norm(nrm);
    nrm = {nrm.x / len, nrm.y / len};
    Intersection out;
    out.point = best_pt;
    out.normal = nrm;
    out.owner = owner;
    out.seg_dir = best_dir;
    return out;
}

CutGeometry build_cut_cells(const Shape& shape, const GridSpec& grid, const PointSets& sets) {
    CutGeometry cut;
    cut.shape = std::make_shared<Shape>(shape);
    cut.grid = grid;
    cut.gamma_minus = sets.gamma_minus;
    cut.gamma_plus = sets.gamma_plus;
    cut.e_set = sets.e_set;
    cut.interior = sets.interior;

    std::unordered_set<LatticeIndex, LatticeIndexHash> gamma;
    gamma.insert(cut.gamma_minus.begin(), cut.gamma_minus.end());
    gamma.insert(cut.gamma_plus.begin(), cut.gamma_plus.end());
    std::unordered_set<LatticeIndex, LatticeIndexHash> e_lookup(cut.e_set.begin(),
                                                                cut.e_set.end());

    std::unordered_set<LatticeIndex, LatticeIndexHash> zeta_seen;
    cut.intersections.reserve(cut.gamma_minus.size());
    for (LatticeIndex owner : cut.gamma_minus) {
        Intersection is = find_intersection(owner, shape, grid);
        const LatticeIndex nb = step(owner, is.seg_dir);
        // candidate patches: lower-left corners (a, b) whose 3x3 bounding box
        // holds both cut-segment endpoints: a <= min(m), a + 2 >= max(m), same in n
        const int amin = std::max(owner.m, nb.m) - 2, amax = std::min(owner.m, nb.m);
        const int bmin = std::max(owner.n, nb.n) - 2, bmax = std::min(owner.n, nb.n);
        struct Cand {
            int plus_count;
            double normal_dot;
            LatticeIndex ll;
        };
        std::vector<Cand> cands;
        for (int a = amin; a <= amax; ++a) {
            for (int b = bmin; b <= bmax; ++b) {
                int plus = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        const LatticeIndex q{a + i, b + j};
                        if (!grid.in_extent(q))
                            throw std::invalid_argument(
                                "build_cut_cells: 3x3 patch exceeds the grid extent; enlarge "
                                "the computational box");
                        if (!sets.is_interior(q)) ++plus;
                    }
                const Point2 ctr = grid.node(a + 1, b + 1);
                cands.push_back({plus, dot(ctr - is.point, is.normal), {a, b}});
            }
        }
        const Cand best = *std::max_element(
            cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
                if (x.plus_count != y.plus_count) return x.plus_count < y.plus_count;
                if (x.normal_dot != y.normal_dot) return x.normal_dot < y.normal_dot;
                return y.ll < x.ll;  // lexicographically smallest wins ties
            });
        is.patch_ll = best.ll;
        int slot = 0;
        int deep_interior = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const LatticeIndex q{best.ll.m + i, best.ll.n + j};
                is.patch[slot++] = q;
                if (!gamma.count(q)) zeta_seen.insert(q);
                if (sets.is_interior(q) &&
                    !std::binary_search(cut.gamma_minus.begin(), cut.gamma_minus.end(), q))
                    ++deep_interior;
            }
        if (deep_interior > 4) cut.thin_geometry_warning = true;
        cut.intersections.push_back(is);
    }

    cut.zeta.assign(zeta_seen.begin(), zeta_seen.end());
    std::sort(cut.zeta.begin(), cut.zeta.end());
    cut.gamma_plus_aug = cut.gamma_plus;
    std::unordered_set<LatticeIndex, LatticeIndexHash> in_gp(cut.gamma_plus.begin(),
                                                             cut.gamma_plus.end());
    for (LatticeIndex z : cut.zeta)
        if (!in_gp.count(z)) cut.gamma_plus_aug.push_back(z);

    for (size_t i = 0; i < cut.gamma_minus.size(); ++i)
        cut.gamma_minus_index[cut.gamma_minus[i]] = (int)i;
    for (size_t i = 0; i < cut.gamma_plus_aug.size(); ++i)
        cut.gamma_plus_aug_index[cut.gamma_plus_aug[i]] = (int)i;

    cut.e_neighbors.resize(cut.gamma_minus.size());
    for (size_t i = 0; i < cut.gamma_minus.size(); ++i)
        for (auto d : kSteps) {
            const LatticeIndex q = step(cut.gamma_minus[i], d);
            if (e_lookup.count(q)) cut.e_neighbors[i].push_back(q);
        }
    return cut;
}

}  // namespace ulgf::geometry
