#include "qc/pentagrid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "qc/errors.hpp"
#include "qc/parallel.hpp"

namespace qc {

double GridLine::value(Vec2 r, const GridShift& shift, const ProjectionBasis& basis) const {
    const auto j = static_cast<std::size_t>(family);
    return dot(basis.d[j], r) + shift.gamma[j] - static_cast<double>(k);
}

namespace {

int ceil_checked(double v, double eps, int family, const char* what) {
    const double nearest = std::round(v);
    if (std::abs(v - nearest) <= eps) {
        std::ostringstream os;
        os << "point lies on grid " << what << " of family " << family << " with k = " << static_cast<long>(nearest);
        throw SingularError(os.str());
    }
    return static_cast<int>(std::ceil(v));
}

}  // namespace

Label k_vector_2d(Vec2 r, const GridShift& shift, const ProjectionBasis& basis, const Tolerance& tol) {
    Label K;
    for (std::size_t j = 0; j < 5; ++j)
        K.k[j] = ceil_checked(dot(basis.d[j], r) + shift.gamma[j], tol.eps, static_cast<int>(j), "line");
    return K;
}

Label k_vector_3d(Vec3 R, const GridShift& shift, const ProjectionBasis& basis, const Tolerance& tol) {
    Label K;
    for (std::size_t j = 0; j < 5; ++j)
        K.k[j] = ceil_checked(dot(basis.w[j], R) + shift.gamma[j], tol.eps, static_cast<int>(j), "plane");
    return K;
}

bool operator<(const Intersection& p, const Intersection& q) {
    return std::tie(p.a.family, p.b.family, p.a.k, p.b.k) < std::tie(q.a.family, q.b.family, q.a.k, q.b.k);
}

std::vector<Intersection> enumerate_intersections(const PlaneBox& box, const GridShift& shift,
                                                  const ProjectionBasis& basis, const Tolerance& tol, int threads) {
    std::vector<std::pair<int, int>> pairs;
    for (int s = 0; s < 5; ++s)
        for (int t = s + 1; t < 5; ++t) pairs.emplace_back(s, t);

    const std::array<Vec2, 4> corners{{{box.xmin, box.ymin}, {box.xmax, box.ymin}, {box.xmax, box.ymax}, {box.xmin, box.ymax}}};
    auto line_range = [&](int j) {
        double lo = 1e300, hi = -1e300;
        for (auto c : corners) {
            const double v = dot(basis.d[static_cast<std::size_t>(j)], c) + shift.gamma[static_cast<std::size_t>(j)];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return std::pair<long, long>{static_cast<long>(std::ceil(lo)), static_cast<long>(std::floor(hi))};
    };

    std::vector<std::vector<Intersection>> parts(pairs.size());
    parallel_chunks(0, static_cast<long>(pairs.size()), threads, [&](long lo, long hi, int) {
        for (long p = lo; p < hi; ++p) {
            const auto [s, t] = pairs[static_cast<std::size_t>(p)];
            const Vec2 ds = basis.d[static_cast<std::size_t>(s)], dt = basis.d[static_cast<std::size_t>(t)];
            const double det = cross(ds, dt);
            const auto [s_lo, s_hi] = line_range(s);
            const auto [t_lo, t_hi] = line_range(t);
            auto& out = parts[static_cast<std::size_t>(p)];
            for (long ks = s_lo; ks <= s_hi; ++ks) {
                for (long kt = t_lo; kt <= t_hi; ++kt) {
                    // Solve ds.r = ks - gamma_s, dt.r = kt - gamma_t by Cramer's rule.
                    const double bs = static_cast<double>(ks) - shift.gamma[static_cast<std::size_t>(s)];
                    const double bt = static_cast<double>(kt) - shift.gamma[static_cast<std::size_t>(t)];
                    const Vec2 r{(bs * dt.y - bt * ds.y) / det, (ds.x * bt - dt.x * bs) / det};
                    if (!box.contains(r)) continue;
                    for (int j = 0; j < 5; ++j) {
                        if (j == s || j == t) continue;
                        const double v = dot(basis.d[static_cast<std::size_t>(j)], r) + shift.gamma[static_cast<std::size_t>(j)];
                        if (std::abs(v - std::round(v)) <= tol.eps) {
                            std::ostringstream os;
                            os.precision(12);
                            os << "singular pentagrid: lines (family " << s << ", k=" << ks << "), (family " << t
                               << ", k=" << kt << ") and (family " << j << ", k=" << std::lround(v)
                               << ") meet at (" << r.x << ", " << r.y << ")";
                            throw SingularError(os.str());
                        }
                    }
                    out.push_back({r, {s, ks}, {t, kt}});
                }
            }
        }
    });
    std::vector<Intersection> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end());
    return all;
}

double Rhombus::acute_angle() const {
    const double a = std::fmod(std::abs(s - t) * GoldenConstants::theta, std::numbers::pi);
    return std::min(a, std::numbers::pi - a);
}

bool Rhombus::thin() const { return acute_angle() < 0.3 * std::numbers::pi; }

Rhombus rhombus_at(const Intersection& ix, const GridShift& shift, const ProjectionBasis& basis, const Tolerance& tol) {
    const int s = ix.a.family, t = ix.b.family;
    const Vec2 ds = basis.d[static_cast<std::size_t>(s)], dt = basis.d[static_cast<std::size_t>(t)];
    // Dual basis: ds.es = 1, dt.es = 0 and ds.et = 0, dt.et = 1.
    const double det = cross(ds, dt);
    const Vec2 es{dt.y / det, -dt.x / det};
    const Vec2 et{-ds.y / det, ds.x / det};

    Rhombus rh;
    rh.s = s;
    rh.t = t;
    static constexpr std::array<std::array<int, 2>, 4> signs{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
    for (std::size_t i = 0; i < 4; ++i) {
        const Vec2 probe = ix.r + kProbeStep * (static_cast<double>(signs[i][0]) * es + static_cast<double>(signs[i][1]) * et);
        rh.labels[i] = k_vector_2d(probe, shift, basis, tol);
        rh.vertices[i] = project_2d(rh.labels[i], basis);
    }
    const Label& base = rh.labels[0];
    const Label expect[4] = {base, base + Label::unit(s), base + Label::unit(s) + Label::unit(t), base + Label::unit(t)};
    for (std::size_t i = 0; i < 4; ++i) {
        if (rh.labels[i] != expect[i]) {
            std::ostringstream os;
            os.precision(12);
            os << "near-singular pentagrid: a third grid line passes within the probe step of the crossing of families "
               << s << " and " << t << " at (" << ix.r.x << ", " << ix.r.y << ")";
            throw SingularError(os.str());
        }
    }
    return rh;
}

PentagridTiling tiling_from_pentagrid(const PlaneBox& box, const GridShift& shift, const ProjectionBasis& basis,
                                      const Tolerance& tol, int threads) {
    const auto crossings = enumerate_intersections(box, shift, basis, tol, threads);
    PentagridTiling out;
    out.rhombi.resize(crossings.size());
    parallel_chunks(0, static_cast<long>(crossings.size()), threads, [&](long lo, long hi, int) {
        for (long i = lo; i < hi; ++i)
            out.rhombi[static_cast<std::size_t>(i)] = rhombus_at(crossings[static_cast<std::size_t>(i)], shift, basis, tol);
    });
    out.vertices.reserve(out.rhombi.size() * 4);
    for (const auto& rh : out.rhombi) out.vertices.insert(out.vertices.end(), rh.labels.begin(), rh.labels.end());
    std::sort(out.vertices.begin(), out.vertices.end());
    out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());
    return out;
}

Vec2 mesh_center(const Label& k, const GridShift& shift, const ProjectionBasis& basis) {
    return 0.4 * window_point_3d(k, shift.values(), basis);
}

}  // namespace qc
