// Compiled with -mavx2 (and without -mfma) when the target is x86-64.

#include "qc/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

#include <limits>

namespace qc::kernels::avx2 {

void max_edge_distance(const EdgeTable& edges, std::span<const double> x, std::span<const double> y,
                       std::span<double> out) {
    const std::size_t n = x.size();
    const std::size_t ne = edges.size();
    const __m256d neg_inf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d px = _mm256_loadu_pd(x.data() + i);
        const __m256d py = _mm256_loadu_pd(y.data() + i);
        __m256d m = neg_inf;
        for (std::size_t e = 0; e < ne; ++e) {
            const __m256d a = _mm256_mul_pd(_mm256_set1_pd(edges.nx[e]), px);
            const __m256d b = _mm256_mul_pd(_mm256_set1_pd(edges.ny[e]), py);
            const __m256d v = _mm256_sub_pd(_mm256_add_pd(a, b), _mm256_set1_pd(edges.offset[e]));
            // (v > m) ? v : m, matching std::max(m, v) on ties.
            m = _mm256_max_pd(v, m);
        }
        _mm256_storeu_pd(out.data() + i, m);
    }
    if (i < n) scalar::max_edge_distance(edges, x.subspan(i), y.subspan(i), out.subspan(i));
}

void project_labels(const LabelColumns& labels, std::span<const double, 5> gamma, std::span<const double, 5> ax,
                    std::span<const double, 5> ay, std::span<double> x, std::span<double> y) {
    const std::size_t n = labels.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d sx = _mm256_setzero_pd();
        __m256d sy = _mm256_setzero_pd();
        for (std::size_t j = 0; j < 5; ++j) {
            const __m128i kj = _mm_loadu_si128(reinterpret_cast<const __m128i*>(labels.k[j].data() + i));
            const __m256d t = _mm256_sub_pd(_mm256_cvtepi32_pd(kj), _mm256_set1_pd(gamma[j]));
            sx = _mm256_add_pd(sx, _mm256_mul_pd(t, _mm256_set1_pd(ax[j])));
            sy = _mm256_add_pd(sy, _mm256_mul_pd(t, _mm256_set1_pd(ay[j])));
        }
        _mm256_storeu_pd(x.data() + i, sx);
        _mm256_storeu_pd(y.data() + i, sy);
    }
    for (; i < n; ++i) {
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

}  // namespace qc::kernels::avx2

#else

#include "qc/errors.hpp"

namespace qc::kernels::avx2 {

void max_edge_distance(const EdgeTable&, std::span<const double>, std::span<const double>, std::span<double>) {
    throw Error("AVX2 kernels are not compiled into this build");
}

void project_labels(const LabelColumns&, std::span<const double, 5>, std::span<const double, 5>,
                    std::span<const double, 5>, std::span<double>, std::span<double>) {
    throw Error("AVX2 kernels are not compiled into this build");
}

}  // namespace qc::kernels::avx2

#endif
