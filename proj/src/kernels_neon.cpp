#include "qc/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

#include <limits>

namespace qc::kernels::neon {

void max_edge_distance(const EdgeTable& edges, std::span<const double> x, std::span<const double> y,
                       std::span<double> out) {
    const std::size_t n = x.size();
    const std::size_t ne = edges.size();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t px = vld1q_f64(x.data() + i);
        const float64x2_t py = vld1q_f64(y.data() + i);
        float64x2_t m = vdupq_n_f64(-std::numeric_limits<double>::infinity());
        for (std::size_t e = 0; e < ne; ++e) {
            const float64x2_t a = vmulq_f64(vdupq_n_f64(edges.nx[e]), px);
            const float64x2_t b = vmulq_f64(vdupq_n_f64(edges.ny[e]), py);
            const float64x2_t v = vsubq_f64(vaddq_f64(a, b), vdupq_n_f64(edges.offset[e]));
            m = vbslq_f64(vcgtq_f64(v, m), v, m);
        }
        vst1q_f64(out.data() + i, m);
    }
    if (i < n) scalar::max_edge_distance(edges, x.subspan(i), y.subspan(i), out.subspan(i));
}

void project_labels(const LabelColumns& labels, std::span<const double, 5> gamma, std::span<const double, 5> ax,
                    std::span<const double, 5> ay, std::span<double> x, std::span<double> y) {
    const std::size_t n = labels.size();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t sx = vdupq_n_f64(0.0);
        float64x2_t sy = vdupq_n_f64(0.0);
        for (std::size_t j = 0; j < 5; ++j) {
            const int32x2_t kj = vld1_s32(labels.k[j].data() + i);
            const float64x2_t t = vsubq_f64(vcvtq_f64_s64(vmovl_s32(kj)), vdupq_n_f64(gamma[j]));
            sx = vaddq_f64(sx, vmulq_f64(t, vdupq_n_f64(ax[j])));
            sy = vaddq_f64(sy, vmulq_f64(t, vdupq_n_f64(ay[j])));
        }
        vst1q_f64(x.data() + i, sx);
        vst1q_f64(y.data() + i, sy);
    }
    if (i < n) {
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
}

}  // namespace qc::kernels::neon

#else

#include "qc/errors.hpp"

namespace qc::kernels::neon {

void max_edge_distance(const EdgeTable&, std::span<const double>, std::span<const double>, std::span<double>) {
    throw Error("NEON kernels are not compiled into this build");
}

void project_labels(const LabelColumns&, std::span<const double, 5>, std::span<const double, 5>,
                    std::span<const double, 5>, std::span<double>, std::span<double>) {
    throw Error("NEON kernels are not compiled into this build");
}

}  // namespace qc::kernels::neon

#endif
