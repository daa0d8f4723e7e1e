#pragma once

// Reference computations that share no code with the library: zonotope
// membership by support functions, mesh feasibility by half-plane clipping,
// and small deterministic random helpers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qc/geometry.hpp"

namespace oracle {

using qc::Label;
using qc::Vec2;
using qc::Vec3;

inline constexpr double kPhi = 1.6180339887498948482;
inline constexpr double kTheta = 2.0 * std::numbers::pi / 5.0;

inline Vec2 d(int j) {
    const double a = kTheta * static_cast<double>(((j % 5) + 5) % 5);
    return {std::cos(a), std::sin(a)};
}
inline Vec3 w(int j) {
    const Vec2 v = d(2 * j);
    return {v.x, v.y, 1.0};
}

// Signed distance-like margin of x against the zonogon sum_j [0,1] g_j:
// negative inside, positive outside. Facet normals are perpendicular to the
// generators; h(u) = sum_j max(0, u . g_j).
inline double zonogon_margin(const std::array<Vec2, 5>& g, Vec2 x) {
    double worst = -INFINITY;
    for (const auto& gi : g) {
        for (double s : {1.0, -1.0}) {
            Vec2 u{-gi.y * s, gi.x * s};
            const double n = std::hypot(u.x, u.y);
            u = {u.x / n, u.y / n};
            double h = 0.0;
            for (const auto& gj : g) h += std::max(0.0, u.x * gj.x + u.y * gj.y);
            worst = std::max(worst, u.x * x.x + u.y * x.y - h);
        }
    }
    return worst;
}

// Same for the zonotope sum_j [0,1] g_j in space; facet normals are g_i x g_j.
inline double zonotope_margin(const std::array<Vec3, 5>& g, Vec3 x) {
    double worst = -INFINITY;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            for (double s : {1.0, -1.0}) {
                Vec3 u = s * qc::cross(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]);
                u = (1.0 / qc::norm(u)) * u;
                double h = 0.0;
                for (const auto& gk : g) h += std::max(0.0, qc::dot(u, gk));
                worst = std::max(worst, qc::dot(u, x) - h);
            }
    return worst;
}

inline std::array<Vec2, 5> d_generators() { return {d(0), d(1), d(2), d(3), d(4)}; }
inline std::array<Vec2, 5> d2_generators() { return {d(0), d(2), d(4), d(6), d(8)}; }
inline std::array<Vec3, 5> w_generators() { return {w(0), w(1), w(2), w(3), w(4)}; }

// Volume of a zonotope: sum over generator triples of |det|.
inline double zonotope_volume(const std::array<Vec3, 5>& g) {
    double v = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            for (int k = j + 1; k < 5; ++k)
                v += std::abs(qc::dot(g[static_cast<std::size_t>(i)],
                                      qc::cross(g[static_cast<std::size_t>(j)], g[static_cast<std::size_t>(k)])));
    return v;
}

// Area of {r : k_j - 1 < d_j . r + gamma_j < k_j for all j}, the mesh with
// label k, found by clipping a large square by the ten half-planes. Positive
// area means k is a vertex of the pentagrid tiling.
inline double mesh_area(const Label& k, const std::array<double, 5>& gamma) {
    std::vector<Vec2> poly{{-1e3, -1e3}, {1e3, -1e3}, {1e3, 1e3}, {-1e3, 1e3}};
    auto clip = [&poly](Vec2 n, double off) {  // keep n . r <= off
        std::vector<Vec2> out;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
            const double da = n.x * a.x + n.y * a.y - off, db = n.x * b.x + n.y * b.y - off;
            if (da <= 0) out.push_back(a);
            if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
                const double t = da / (da - db);
                out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
            }
        }
        poly = std::move(out);
    };
    for (int j = 0; j < 5 && !poly.empty(); ++j) {
        const Vec2 dj = d(j);
        const double kj = static_cast<double>(k.k[static_cast<std::size_t>(j)]);
        const double g = gamma[static_cast<std::size_t>(j)];
        clip(dj, kj - g);
        if (!poly.empty()) clip({-dj.x, -dj.y}, -(kj - 1.0 - g));
    }
    if (poly.size() < 3) return 0.0;
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 p = poly[i], q = poly[(i + 1) % poly.size()];
        a += p.x * q.y - p.y * q.x;
    }
    return 0.5 * a;
}

// Deterministic uniform doubles in [lo, hi).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53);
    }
    int integer(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    Label label(int lo, int hi) {
        Label k;
        for (auto& v : k.k) v = integer(lo, hi);
        return k;
    }
    std::array<double, 5> gamma() {
        std::array<double, 5> g{};
        for (auto& v : g) v = uniform();
        return g;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace oracle
