#pragma once

// Edges, vertex types [n, n']_I and their frequencies for generalized Penrose
// tilings obtained from the slice windows V_I.

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qc/geometry.hpp"
#include "qc/window.hpp"

namespace qc {

enum class EdgeSign { Positive, Negative };

// Render class of an edge, by the indices of its endpoints.
enum class EdgeStyle {
    ThinDashed,   // 1-2
    ThickSolid,   // 2-3
    ThinSolid,    // 3-4
    ThickDashed,  // 4-5
};

// Throws DomainError unless the indices are consecutive and within 1..5.
EdgeStyle edge_style(int index_a, int index_b);
const char* to_string(EdgeStyle style);

struct DirectedEdge {
    Label from;
    Label to;
    int family = 0;  // to - from = +-e_family
    Vec2 direction;  // +-d_family
    EdgeSign sign = EdgeSign::Positive;
    EdgeStyle style = EdgeStyle::ThinDashed;
};

// Edges from an accepted vertex to its accepted neighbours k +- e_m.
// Throws DomainError if k itself is not accepted and SingularError if any
// neighbour is singular.
std::vector<DirectedEdge> edges_at(const Label& k, const GridShift& shift, const WindowSet& windows,
                                   const WindowGeometry& geo);

struct VertexType {
    int index = 0;
    int n_pos = 0;
    int n_neg = 0;

    friend auto operator<=>(const VertexType&, const VertexType&) = default;
    std::string to_string() const;  // "[n,n']_I"
};

VertexType classify_vertex(const Label& k, const GridShift& shift, const WindowSet& windows, const WindowGeometry& geo);

// Types of many accepted vertices at once; result[i] belongs to vertices[i].
std::vector<VertexType> classify_vertices(std::span<const Label> vertices, const GridShift& shift,
                                          const WindowSet& windows, const WindowGeometry& geo, int threads = 1);

// A_I[n, n'](c). The probability of type [n, n']_I is A / (5p). Zero for types
// outside the census. Throws DomainError for arguments out of range.
double analytic_A(int index, int n_pos, int n_neg, double c);
double analytic_probability(const VertexType& t, double c);

// Values at or below this are treated as an empty region of the window.
inline constexpr double kSupportFloor = 1e-12;

// The 44 vertex types with a frequency function (3 + 9 + 20 + 9 + 3).
const std::vector<VertexType>& census_types();
bool in_census(const VertexType& t);
// Census types of the given index with analytic_A > kSupportFloor at c.
std::vector<VertexType> analytic_support(int index, double c);

struct FrequencyRow {
    VertexType type;
    double analytic = 0.0;   // A / (5p)
    double empirical = 0.0;  // count / total
    std::size_t count = 0;
};

struct FrequencyReport {
    double c = 0.0;
    std::size_t total = 0;
    std::vector<FrequencyRow> rows;  // ascending by type

    double analytic_sum() const;
    const FrequencyRow* find(const VertexType& t) const;
};

// Label-box margin of vertices excluded from counting.
inline constexpr int kBoundaryMargin = 2;

// Classifies every accepted vertex at least kBoundaryMargin label steps inside
// the box. Throws CensusViolation for a type outside the census.
FrequencyReport empirical_frequencies(const LabelBox& box, const GridShift& shift, const WindowSet& windows,
                                      const WindowGeometry& geo, int threads = 1);

}  // namespace qc
