#pragma once

// de Bruijn's dual construction: tiling vertices from the meshes of the
// pentagrid d_j . r + gamma_j = k_j, independent of the window method.

#include <array>
#include <vector>

#include "qc/geometry.hpp"
#include "qc/window.hpp"

namespace qc {

struct GridLine {
    int family = 0;  // 0..4
    long k = 0;

    double value(Vec2 r, const GridShift& shift, const ProjectionBasis& basis) const;
};

// The mesh label (K_0..K_4) of a point. Throws SingularError on a grid line.
Label k_vector_2d(Vec2 r, const GridShift& shift, const ProjectionBasis& basis, const Tolerance& tol);
// Same for the planes w_j . R + gamma_j = k_j.
Label k_vector_3d(Vec3 R, const GridShift& shift, const ProjectionBasis& basis, const Tolerance& tol);

// Axis-aligned box in the pentagrid parameter plane.
struct PlaneBox {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

    static PlaneBox centered(double half_width) { return {-half_width, half_width, -half_width, half_width}; }
    bool contains(Vec2 r, double margin = 0.0) const {
        return r.x >= xmin + margin && r.x <= xmax - margin && r.y >= ymin + margin && r.y <= ymax - margin;
    }
};

struct Intersection {
    Vec2 r;
    GridLine a;  // a.family < b.family
    GridLine b;

    friend bool operator<(const Intersection& p, const Intersection& q);
};

// Every crossing of two lines from distinct families inside the box, sorted by
// (family pair, line labels). Throws SingularError if a third line passes
// within tolerance of a crossing.
std::vector<Intersection> enumerate_intersections(const PlaneBox& box, const GridShift& shift,
                                                  const ProjectionBasis& basis, const Tolerance& tol,
                                                  int threads = 1);

struct Rhombus {
    int s = 0, t = 0;                // the two families, s < t
    std::array<Label, 4> labels;     // base, base + e_s, base + e_s + e_t, base + e_t
    std::array<Vec2, 4> vertices;    // D^T of each label

    // Angle between d_s and d_t folded into (0, pi/2]: 2pi/5 (fat) or pi/5 (thin).
    double acute_angle() const;
    bool thin() const;
};

// Probe step used to land in the four meshes around a crossing.
inline constexpr double kProbeStep = 1e-4;

Rhombus rhombus_at(const Intersection& ix, const GridShift& shift, const ProjectionBasis& basis, const Tolerance& tol);

struct PentagridTiling {
    std::vector<Label> vertices;  // unique, ascending
    std::vector<Rhombus> rhombi;  // one per crossing, in crossing order
};

PentagridTiling tiling_from_pentagrid(const PlaneBox& box, const GridShift& shift, const ProjectionBasis& basis,
                                      const Tolerance& tol, int threads = 1);

// Approximate centre of the mesh labelled k: (2/5) D^T (k - gamma). Every point of
// the mesh lies within 2p/5 of it.
Vec2 mesh_center(const Label& k, const GridShift& shift, const ProjectionBasis& basis);

}  // namespace qc
