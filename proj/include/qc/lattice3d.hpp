#pragma once

// The space lattice L = { W^T k : D^T (k - gamma) inside Q }, its polytope
// cells hanging from tips, and the census of how neighbouring cells overlap.

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qc/geometry.hpp"
#include "qc/polyhedron.hpp"
#include "qc/window.hpp"

namespace qc {

class Lattice3 {
public:
    Lattice3(LabelBox box, std::vector<Label> sorted_labels, const ProjectionBasis& basis);

    const LabelBox& box() const { return box_; }
    const std::vector<Label>& labels() const { return labels_; }
    const std::vector<Vec3>& points() const { return points_; }
    std::size_t size() const { return labels_.size(); }
    bool contains(const Label& k) const { return index_.count(k) != 0; }
    std::optional<Vec3> point(const Label& k) const;

private:
    LabelBox box_;
    std::vector<Label> labels_;
    std::vector<Vec3> points_;
    std::unordered_map<Label, std::size_t, LabelHash> index_;
};

Lattice3 build_lattice3(const LabelBox& box, const GridShift& shift, const WindowGeometry& geo, int threads = 1);

// Labels of L whose test point lies strictly inside the inner decagon, ascending.
// Throws SingularError for a test point on its boundary.
std::vector<Label> find_tips(const Lattice3& L, const GridShift& shift, const WindowGeometry& geo);

// Label offsets m with W^T m strictly inside P (interior) or on its boundary.
struct CellStencil {
    std::vector<Label> interior;
    std::vector<Label> boundary;
    std::vector<Label> hull_vertices;  // the 22 n_i that are vertices of P
    int reach = 0;                     // max |m_j| over all offsets
};

const CellStencil& cell_stencil(const WindowGeometry& geo);

struct CellInstance {
    Label tip;
    Vec3 tip_point;
    std::vector<Label> hull_atoms;      // the 22 hull vertices, all in L
    std::vector<Label> interior_atoms;  // the atoms of L strictly inside
    int triangle = -1;                  // triangle of the inner decagon holding the tip's test point

    std::size_t atom_count() const { return hull_atoms.size() + interior_atoms.size(); }
};

// Atoms of L strictly inside P + W^T tip. Throws ConsistencyError unless
// there are exactly four, or when L does not cover the cell.
std::vector<Label> interior_atoms(const Label& tip, const Lattice3& L, const WindowGeometry& geo);

// Full cell of a tip: 22 hull atoms plus 4 interior atoms. Throws
// ConsistencyError when a hull vertex is missing from L or another atom of L
// lies on the hull.
CellInstance cell_at(const Label& tip, const Lattice3& L, const GridShift& shift, const WindowGeometry& geo);

enum class OverlapLabel { A1, A23, A46, A57, A8 };

const char* to_string(OverlapLabel label);

struct OverlapSignature {
    int neighbors = 0;
    int K = 0;  // shared 12-face polyhedra
    int J = 0;  // shared 6-face polyhedra

    friend auto operator<=>(const OverlapSignature&, const OverlapSignature&) = default;
};

struct OverlapClass {
    OverlapLabel label = OverlapLabel::A1;
    OverlapSignature signature;
    std::vector<Label> partners;  // offsets to the tips sharing a solid with this one, stencil order
};

inline constexpr std::array<OverlapSignature, 5> kOverlapSignatures{{{4, 0, 4}, {5, 1, 4}, {4, 1, 3}, {5, 2, 3}, {6, 2, 4}}};

// Throws CensusViolation for a signature outside the five classes.
OverlapLabel overlap_label(const OverlapSignature& sig);

// 1 : p^-3 : p^-2 : p^-3 : (p^-2 + p^-4)/2, normalized to sum 1.
std::array<double, 5> analytic_overlap_ratios();

// Sorted tip labels with constant-time membership.
class TipIndex {
public:
    explicit TipIndex(std::vector<Label> sorted_tips);

    const std::vector<Label>& tips() const { return tips_; }
    bool contains(const Label& k) const { return set_.count(k) != 0; }

private:
    std::vector<Label> tips_;
    std::unordered_set<Label, LabelHash> set_;
};

// Tip-to-tip label offsets that can give overlapping cells: xy distance < 2p,
// |dz| <= 4, and test points that both fit in the inner decagon.
const std::vector<Label>& neighbor_stencil(const WindowGeometry& geo);

// Classifies tips by their overlap signature. Intersections are memoized by
// label offset; one instance per thread.
class OverlapClassifier {
public:
    explicit OverlapClassifier(const WindowGeometry& geo);

    const IntersectionSummary& overlap(const Label& offset);
    OverlapClass classify(const Label& tip, const TipIndex& tips);
    // Face counts of every solid overlap seen so far.
    const std::map<std::size_t, std::size_t>& face_histogram() const { return face_histogram_; }

private:
    const WindowGeometry& geo_;
    std::map<Label, IntersectionSummary> cache_;
    std::map<std::size_t, std::size_t> face_histogram_;
};

OverlapClass classify_overlap(const Label& tip, const TipIndex& tips, const WindowGeometry& geo);

struct OverlapCensus {
    std::array<std::size_t, 5> counts{};
    std::size_t total = 0;
    std::map<std::size_t, std::size_t> face_histogram;  // faces of shared polyhedra -> occurrences
    // Atoms common to two overlapping cells -> occurrences, per class. Reported only.
    std::array<std::map<std::size_t, std::size_t>, 5> shared_atoms;

    std::array<double, 5> frequencies() const;
};

// Labels of all 26 atoms of a tip's cell, ascending.
std::vector<Label> cell_atoms(const Label& tip, const Lattice3& L, const WindowGeometry& geo);

// Classifies every tip far enough inside the label box that all of its
// overlapping neighbours are present.
OverlapCensus overlap_census(const Lattice3& L, const TipIndex& tips, const WindowGeometry& geo, int threads = 1);

// Margin (in label steps) that keeps a tip's neighbours and their cells inside the box.
int census_margin(const WindowGeometry& geo);

}  // namespace qc
