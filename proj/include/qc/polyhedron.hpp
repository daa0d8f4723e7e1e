#pragma once

#include <cstddef>
#include <vector>

#include "qc/geometry.hpp"
#include "qc/window.hpp"

namespace qc {

// Convex polyhedron as a list of planar faces with outward unit normals and
// vertex loops counterclockwise seen from outside. Intersections with
// half-spaces are computed by clipping every face and closing the cut with a
// cap face.
class ConvexPolyhedron {
public:
    struct Face {
        Vec3 normal;
        double offset = 0.0;
        std::vector<Vec3> loop;
    };

    ConvexPolyhedron() = default;
    static ConvexPolyhedron from_polytope(const PolytopeP& P, Vec3 translation = {});

    // Keeps the part with normal . x <= offset. Points within eps of the plane
    // count as on it. normal must be a unit vector.
    void clip(Vec3 normal, double offset, double eps);

    const std::vector<Face>& faces() const { return faces_; }
    bool empty() const { return faces_.empty(); }
    double volume() const;
    // Faces after merging coplanar pieces (normals within 1e-6 rad, offsets within eps).
    std::size_t face_count(double eps) const;
    // Distinct vertices, merged within eps.
    std::vector<Vec3> vertices(double eps) const;

private:
    std::vector<Face> faces_;
};

// Overlaps thinner than this are touches, not shared solids.
inline constexpr double kVolumeFloor = 1e-9;

struct IntersectionSummary {
    std::size_t faces = 0;
    double volume = 0.0;

    bool solid() const { return volume > kVolumeFloor; }
};

// P intersected with P + offset, i.e. the 40 half-spaces of both copies.
IntersectionSummary convex_intersection(Vec3 offset, const PolytopeP& P, const Tolerance& tol);

}  // namespace qc
