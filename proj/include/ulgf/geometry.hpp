#ifndef ULGF_GEOMETRY_HPP
#define ULGF_GEOMETRY_HPP

#include <array>
#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "ulgf/common.hpp"

namespace ulgf::geometry {

struct Circle {
    Point2 center;
    double radius;
};

/// Counterclockwise simple polygon; the distance is exact Euclidean with
/// sign by crossing parity, so orientation only matters for documentation.
struct PolygonShape {
    std::vector<Point2> vertices;
};

/// Segment [a, b] inflated by radius (a stadium / rounded rod).
struct CapsuleShape {
    Point2 a;
    Point2 b;
    double radius;
};

class Shape;

struct UnionShape {
    std::vector<Shape> members;
};

/// Implicit scatterer: signed distance < 0 strictly inside, > 0 outside,
/// 0 on the boundary.
class Shape {
public:
    Shape(Circle c) : rep_(std::move(c)) {}
    Shape(PolygonShape p) : rep_(std::move(p)) {}
    Shape(CapsuleShape c) : rep_(std::move(c)) {}
    Shape(UnionShape u) : rep_(std::move(u)) {}

    double signed_distance(Point2 p) const;

    template <class V>
    decltype(auto) visit(V&& v) const {
        return std::visit(std::forward<V>(v), rep_);
    }

private:
    std::variant<Circle, PolygonShape, CapsuleShape, UnionShape> rep_;
};

double signed_distance(const Shape& shape, Point2 p);

/// Uniform lattice: node (m, n) sits at origin + (m h, n h); extent is the
/// half-width in lattice units per axis (nodes m in [-extent_x, extent_x]).
struct GridSpec {
    double h;
    Point2 origin;
    int extent_x;
    int extent_y;

    Point2 node(int m, int n) const { return {origin.x + m * h, origin.y + n * h}; }
    bool in_extent(LatticeIndex p) const {
        return std::abs(p.m) <= extent_x && std::abs(p.n) <= extent_y;
    }
};

/// Classified point sets. gamma_minus/gamma_plus/e_set are ordered
/// lexicographically by (m, n); M- is kept as a hash set (M+ is its
/// in-extent complement).
struct PointSets {
    std::vector<LatticeIndex> gamma_minus;
    std::vector<LatticeIndex> gamma_plus;
    std::vector<LatticeIndex> e_set;
    std::unordered_set<LatticeIndex, LatticeIndexHash> interior;  // M-
    GridSpec grid;

    bool is_interior(LatticeIndex p) const { return interior.count(p) > 0; }
    bool is_exterior(LatticeIndex p) const { return grid.in_extent(p) && !is_interior(p); }
    std::vector<LatticeIndex> m_minus() const;
    std::vector<LatticeIndex> m_plus() const;  // materialized; test use only
};

/// Node membership per the set definitions: M- = nodes strictly inside,
/// gamma_- = M- nodes with an exterior 5-point neighbor, gamma_+ = the
/// exterior mirror, E = stencil neighbors of gamma_- not already in gamma.
/// Throws DegenerateNodeError if the boundary passes through a node to
/// within 1e-12 h (the caller perturbs the grid origin by 1e-6 h and
/// retries).
PointSets classify_points(const Shape& shape, const GridSpec& grid);

/// Boundary crossing owned by one gamma_- point.
struct Intersection {
    Point2 point;                        ///< crossing on Gamma
    Vec2 normal;                         ///< outward unit normal
    LatticeIndex owner;                  ///< the gamma_- node
    LatticeIndex seg_dir;                ///< lattice step from owner toward the crossing
    LatticeIndex patch_ll;               ///< lower-left node of the 3x3 patch
    std::array<LatticeIndex, 9> patch;   ///< patch nodes, x-major: (ll.m+i, ll.n+j)
};

/// Crossing search along the owner's exterior stencil segments (+x, -x,
/// +y, -y order), each resolved by bisection to |sdf| <= 1e-12 h; the
/// crossing closest to the owner wins. The normal is the normalized
/// central-difference gradient of the signed distance at the crossing.
Intersection find_intersection(LatticeIndex owner, const Shape& shape, const GridSpec& grid);

/// Classified sets plus per-owner cut cells and the zeta augmentation.
struct CutGeometry {
    std::shared_ptr<const Shape> shape;
    GridSpec grid;
    std::vector<LatticeIndex> gamma_minus;
    std::vector<LatticeIndex> gamma_plus;
    std::vector<LatticeIndex> e_set;
    std::vector<LatticeIndex> zeta;
    std::vector<LatticeIndex> gamma_plus_aug;  // gamma_+ then the new zeta nodes
    std::vector<Intersection> intersections;   // parallel to gamma_minus
    std::vector<std::vector<LatticeIndex>> e_neighbors;  // E nodes adjacent to each gamma_- node
    std::unordered_map<LatticeIndex, int, LatticeIndexHash> gamma_minus_index;
    std::unordered_map<LatticeIndex, int, LatticeIndexHash> gamma_plus_aug_index;
    std::unordered_set<LatticeIndex, LatticeIndexHash> interior;  // M-
    bool thin_geometry_warning = false;

    bool is_interior(LatticeIndex p) const { return interior.count(p) > 0; }
};

/// For each gamma_- owner, selects the 3x3 patch among the candidates whose
/// bounding box contains both endpoints of the cut segment, maximizing the
/// number of exterior (M+) nodes; ties break toward the patch center most
/// aligned with the outward normal, then lexicographically. Patch nodes
/// outside gamma join zeta, and gamma_+ is augmented to gamma_+ u zeta.
/// Sets thin_geometry_warning when a selected patch carries more than 4
/// interior non-gamma_- nodes.
CutGeometry build_cut_cells(const Shape& shape, const GridSpec& grid, const PointSets& sets);

}  // namespace ulgf::geometry

#endif
