#include <algorithm>
#include <limits>

#include "qc/kernels.hpp"

namespace qc::kernels::scalar {

void max_edge_distance(const EdgeTable& edges, std::span<const double> x, std::span<const double> y,
                       std::span<double> out) {
    const std::size_t n = x.size();
    const std::size_t ne = edges.size();
    for (std::size_t i = 0; i < n; ++i) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < ne; ++e) {
            const double v = (edges.nx[e] * x[i] + edges.ny[e] * y[i]) - edges.offset[e];
            m = std::max(m, v);
        }
        out[i] = m;
    }
}

void project_labels(const LabelColumns& labels, std::span<const double, 5> gamma, std::span<const double, 5> ax,
                    std::span<const double, 5> ay, std::span<double> x, std::span<double> y) {
    const std::size_t n = labels.size();
    for (std::size_t i = 0; i < n; ++i) {
        double sx = 0.0, sy = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
            const double t = static_cast<double>(labels.k[j][i]) - gamma[j];
            sx = sx + t * ax[j];
            sy = sy + t * ay[j];
        }
        x[i] = sx;
        y[i] = sy;
    }
}

}  // namespace qc::kernels::scalar
