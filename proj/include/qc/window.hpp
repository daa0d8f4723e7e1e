#pragma once

// Acceptance geometry: the projected 5-cube in the orthogonal space (polytope P),
// in the physical plane (decagon Q), the slice windows V_I, and the
// mesh-condition predicates built on them.

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qc/geometry.hpp"
#include "qc/kernels.hpp"

namespace qc {

// Grid offsets gamma_j with c = sum_j gamma_j reduced into [0, 1).
struct GridShift {
    std::array<double, 5> gamma{};
    double c = 0.0;

    std::span<const double, 5> values() const { return std::span<const double, 5>(gamma); }
};

// Moves the integer part of sum(gamma) out of gamma_0 (a relabeling k_0 -> k_0 - n).
GridShift normalize_shift(std::array<double, 5> gamma);
// Overwrites gamma_0 so that the offsets sum to c. Requires 0 <= c < 1.
GridShift shift_with_sum(std::array<double, 5> gamma, double c);

// Vertices of the unit 5-cube in the fixed order n_0 .. n_31.
const std::array<Label, 32>& cube_vertices();

struct PolyFace {
    std::vector<int> vertices;  // point ids, counterclockwise seen from outside
    Vec3 normal;                // unit, outward
    double offset = 0.0;        // normal . x <= offset inside
};

// Convex hull of P_i = W^T n_i.
struct PolytopeP {
    std::array<Vec3, 32> points;
    std::vector<int> vertices;  // hull vertex ids, ascending
    std::vector<std::pair<int, int>> edges;
    std::vector<PolyFace> faces;
    std::vector<int> interior_points;

    double max_face_distance(Vec3 pt) const;
    Location locate(Vec3 pt, double eps) const;
};

PolytopeP build_polytope_P(const ProjectionBasis& basis, const Tolerance& tol);

// Convex hull of Q_i = D^T n_i plus the inner decagon and its fan of triangles.
struct DecagonQ {
    std::array<Vec2, 32> points;
    std::vector<int> vertex_ids;  // hull vertices in counterclockwise order
    ConvexPolygon hull;
    std::vector<int> interior_points;
    std::vector<int> inner_ids;  // radius 1/p points, counterclockwise
    ConvexPolygon inner;
    std::vector<ConvexPolygon> triangles;  // (center, inner_i, inner_{i+1})

    // Index of the triangle of the inner decagon strictly containing pt, or -1.
    int triangle_of(Vec2 pt, double eps) const;
};

DecagonQ build_decagon_Q(const ProjectionBasis& basis, const Tolerance& tol);

struct SliceWindow {
    int index = 0;
    double height = 0.0;
    ConvexPolygon polygon;
};

// Cross-section of P at z = index - c.
SliceWindow slice_window(const PolytopeP& P, int index, double c, const Tolerance& tol);

// Everything derived from the projection basis alone.
struct WindowGeometry {
    ProjectionBasis basis;
    Tolerance tol;
    PolytopeP P;
    DecagonQ Q;
    kernels::EdgeTable q_edges;
    kernels::EdgeTable inner_edges;
};

WindowGeometry make_window_geometry(const Tolerance& tol = Tolerance{});

// The slice windows V_1 .. V_5 for one value of c. Degenerate or empty slices
// are absent and reject every label of that index.
class WindowSet {
public:
    WindowSet(const WindowGeometry& geo, double c);

    double c() const { return c_; }
    const SliceWindow* window(int index) const;
    const kernels::EdgeTable* edge_table(int index) const;

private:
    double c_;
    std::array<std::optional<SliceWindow>, 6> windows_;
    std::array<kernels::EdgeTable, 6> tables_;
};

enum class Decision { Accept, Reject, Singular };

const char* to_string(Decision d);

struct Acceptance2D {
    Decision decision = Decision::Reject;
    Vec2 vertex;  // D^T k, set on Accept
    int index = 0;
};

struct Acceptance3D {
    Decision decision = Decision::Reject;
    Vec3 vertex;  // W^T k, set on Accept
};

Acceptance2D accept_2d(const Label& k, const GridShift& shift, const WindowSet& windows, const WindowGeometry& geo);
Acceptance3D accept_3d(const Label& k, const GridShift& shift, const WindowGeometry& geo);

// Symmetric box |k_j| <= half_width in label space.
struct LabelBox {
    int half_width = 0;

    bool contains(const Label& k, int margin = 0) const;
};

// All labels in the box accepted for the plane tiling, ascending. Candidates are
// generated mesh-by-mesh from two grid families, then tested in batches.
// Throws SingularError if any candidate sits on a window boundary.
std::vector<Label> accepted_labels_2d(const LabelBox& box, const GridShift& shift, const WindowSet& windows,
                                      const WindowGeometry& geo, int threads = 1);
// All labels in the box accepted for the space lattice, ascending.
std::vector<Label> accepted_labels_3d(const LabelBox& box, const GridShift& shift, const WindowGeometry& geo,
                                      int threads = 1);

// Batched locate of window test points: decisions[i] for the test point
// (x[i], y[i]) against the polygon described by edges.
void decide_batch(const kernels::EdgeTable& edges, std::span<const double> x, std::span<const double> y, double eps,
                  std::vector<Decision>& decisions);

}  // namespace qc
