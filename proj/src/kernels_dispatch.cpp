#include <atomic>
#include <cstdlib>
#include <string>

#include "qc/errors.hpp"
#include "qc/kernels.hpp"

namespace qc::kernels {

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "?";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(QC_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(__aarch64__) && defined(__ARM_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa best_isa() {
    if (isa_available(Isa::Avx2)) return Isa::Avx2;
    if (isa_available(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

namespace {

Isa initial_isa() {
    if (const char* env = std::getenv("QC_ISA")) {
        const std::string v(env);
        if (v == "scalar") return Isa::Scalar;
        if (v == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
        if (v == "neon" && isa_available(Isa::Neon)) return Isa::Neon;
    }
    return best_isa();
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_available(isa)) throw ConfigError("instruction set '" + std::string(to_string(isa)) + "' is not available");
    active().store(isa, std::memory_order_relaxed);
}

EdgeTable EdgeTable::from(const ConvexPolygon& poly) {
    EdgeTable t;
    for (const auto& e : poly.edges()) {
        t.nx.push_back(e.normal.x);
        t.ny.push_back(e.normal.y);
        t.offset.push_back(e.offset);
    }
    return t;
}

void LabelColumns::reserve(std::size_t n) {
    for (auto& c : k) c.reserve(n);
}

void LabelColumns::push_back(const Label& l) {
    for (std::size_t j = 0; j < 5; ++j) k[j].push_back(l.k[j]);
}

Label LabelColumns::row(std::size_t i) const {
    Label l;
    for (std::size_t j = 0; j < 5; ++j) l.k[j] = k[j][i];
    return l;
}

void LabelColumns::clear() {
    for (auto& c : k) c.clear();
}

void max_edge_distance(const EdgeTable& edges, std::span<const double> x, std::span<const double> y,
                       std::span<double> out) {
    switch (active_isa()) {
        case Isa::Avx2: return avx2::max_edge_distance(edges, x, y, out);
        case Isa::Neon: return neon::max_edge_distance(edges, x, y, out);
        case Isa::Scalar: break;
    }
    scalar::max_edge_distance(edges, x, y, out);
}

void project_labels(const LabelColumns& labels, std::span<const double, 5> gamma, std::span<const double, 5> ax,
                    std::span<const double, 5> ay, std::span<double> x, std::span<double> y) {
    switch (active_isa()) {
        case Isa::Avx2: return avx2::project_labels(labels, gamma, ax, ay, x, y);
        case Isa::Neon: return neon::project_labels(labels, gamma, ax, ay, x, y);
        case Isa::Scalar: break;
    }
    scalar::project_labels(labels, gamma, ax, ay, x, y);
}

}  // namespace qc::kernels
