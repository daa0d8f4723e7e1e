#pragma once

// Batched arithmetic used by lattice enumeration. Each kernel has a scalar
// reference and vector variants (AVX2 on x86-64, NEON on AArch64) that are
// selected at runtime. Variants perform the same operations in the same order
// without fused multiply-add, so their results are bit-identical to the
// scalar reference.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qc/geometry.hpp"

namespace qc::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

// Best variant compiled in and supported by the running CPU.
Isa best_isa();
// Variant used by the dispatching entry points. Defaults to best_isa(); the
// QC_ISA environment variable ("scalar", "avx2", "neon") overrides it.
Isa active_isa();
void set_active_isa(Isa isa);
bool isa_available(Isa isa);

// Structure-of-arrays copy of a polygon's edge half-planes.
struct EdgeTable {
    std::vector<double> nx;
    std::vector<double> ny;
    std::vector<double> offset;

    static EdgeTable from(const ConvexPolygon& poly);
    std::size_t size() const { return nx.size(); }
};

// Five int32 columns, one row per label.
struct LabelColumns {
    std::array<std::vector<std::int32_t>, 5> k;

    std::size_t size() const { return k[0].size(); }
    void reserve(std::size_t n);
    void push_back(const Label& l);
    Label row(std::size_t i) const;
    void clear();
};

// out[i] = max_e (nx[e] * x[i] + ny[e] * y[i]) - offset[e]
void max_edge_distance(const EdgeTable& edges, std::span<const double> x, std::span<const double> y,
                       std::span<double> out);
// x[i] = sum_j (k_j[i] - gamma_j) * ax_j, y likewise, summed in order j = 0..4.
void project_labels(const LabelColumns& labels, std::span<const double, 5> gamma, std::span<const double, 5> ax,
                    std::span<const double, 5> ay, std::span<double> x, std::span<double> y);

// Explicit variants, used by the equivalence tests and benchmarks.
namespace scalar {
void max_edge_distance(const EdgeTable& edges, std::span<const double> x, std::span<const double> y,
                       std::span<double> out);
void project_labels(const LabelColumns& labels, std::span<const double, 5> gamma, std::span<const double, 5> ax,
                    std::span<const double, 5> ay, std::span<double> x, std::span<double> y);
}  // namespace scalar

namespace avx2 {
void max_edge_distance(const EdgeTable& edges, std::span<const double> x, std::span<const double> y,
                       std::span<double> out);
void project_labels(const LabelColumns& labels, std::span<const double, 5> gamma, std::span<const double, 5> ax,
                    std::span<const double, 5> ay, std::span<double> x, std::span<double> y);
}  // namespace avx2

namespace neon {
void max_edge_distance(const EdgeTable& edges, std::span<const double> x, std::span<const double> y,
                       std::span<double> out);
void project_labels(const LabelColumns& labels, std::span<const double, 5> gamma, std::span<const double, 5> ax,
                    std::span<const double, 5> ay, std::span<double> x, std::span<double> y);
}  // namespace neon

}  // namespace qc::kernels
