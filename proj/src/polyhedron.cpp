#include "qc/polyhedron.hpp"

#include <algorithm>
#include <cmath>

namespace qc {

namespace {

double loop_area(const std::vector<Vec3>& loop, Vec3 normal) {
    Vec3 s;
    for (std::size_t i = 0; i < loop.size(); ++i) s = s + cross(loop[i], loop[(i + 1) % loop.size()]);
    return 0.5 * dot(normal, s);
}

void drop_repeats(std::vector<Vec3>& loop, double eps) {
    std::vector<Vec3> out;
    for (const auto& v : loop)
        if (out.empty() || norm(v - out.back()) > eps) out.push_back(v);
    while (out.size() > 1 && norm(out.front() - out.back()) <= eps) out.pop_back();
    loop = std::move(out);
}

}  // namespace

ConvexPolyhedron ConvexPolyhedron::from_polytope(const PolytopeP& P, Vec3 translation) {
    ConvexPolyhedron poly;
    for (const auto& f : P.faces) {
        Face face;
        face.normal = f.normal;
        face.offset = f.offset + dot(f.normal, translation);
        for (int id : f.vertices) face.loop.push_back(P.points[static_cast<std::size_t>(id)] + translation);
        poly.faces_.push_back(std::move(face));
    }
    return poly;
}

void ConvexPolyhedron::clip(Vec3 normal, double offset, double eps) {
    bool cut = false;
    for (const auto& f : faces_)
        for (const auto& v : f.loop)
            if (dot(normal, v) - offset > eps) cut = true;
    if (!cut) return;

    std::vector<Vec3> cap;
    std::vector<Face> kept;
    for (auto& f : faces_) {
        std::vector<Vec3> out;
        const std::size_t n = f.loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 cur = f.loop[i], nxt = f.loop[(i + 1) % n];
            const double dc = dot(normal, cur) - offset, dn = dot(normal, nxt) - offset;
            if (dc <= eps) {
                out.push_back(cur);
                if (dc >= -eps) cap.push_back(cur);
            }
            if ((dc < -eps && dn > eps) || (dc > eps && dn < -eps)) {
                const Vec3 p = cur + (dc / (dc - dn)) * (nxt - cur);
                out.push_back(p);
                cap.push_back(p);
            }
        }
        drop_repeats(out, eps);
        if (out.size() < 3 || loop_area(out, f.normal) <= eps * eps) continue;
        f.loop = std::move(out);
        kept.push_back(std::move(f));
    }
    faces_ = std::move(kept);
    if (faces_.empty()) return;

    // Close the cut with the convex hull of the points on the plane.
    Vec3 u = std::abs(normal.x) < 0.9 ? cross(normal, Vec3{1, 0, 0}) : cross(normal, Vec3{0, 1, 0});
    u = (1.0 / norm(u)) * u;
    const Vec3 v = cross(normal, u);
    std::vector<Vec2> flat;
    for (const auto& p : cap) flat.push_back({dot(p, u), dot(p, v)});
    const auto hull = convex_hull_2d(flat, eps);
    if (hull.size() < 3) return;
    Face capf;
    capf.normal = normal;
    capf.offset = offset;
    for (auto h : hull) capf.loop.push_back(offset * normal + h.x * u + h.y * v);
    if (loop_area(capf.loop, normal) > eps * eps) faces_.push_back(std::move(capf));
}

double ConvexPolyhedron::volume() const {
    double vol = 0.0;
    for (const auto& f : faces_) vol += dot(f.normal, f.loop.front()) * loop_area(f.loop, f.normal);
    return vol / 3.0;
}

std::size_t ConvexPolyhedron::face_count(double eps) const {
    std::vector<const Face*> reps;
    for (const auto& f : faces_) {
        const bool merged = std::any_of(reps.begin(), reps.end(), [&](const Face* r) {
            const double angle = std::acos(std::clamp(dot(r->normal, f.normal), -1.0, 1.0));
            return angle < 1e-6 && std::abs(r->offset - f.offset) < eps;
        });
        if (!merged) reps.push_back(&f);
    }
    return reps.size();
}

std::vector<Vec3> ConvexPolyhedron::vertices(double eps) const {
    std::vector<Vec3> out;
    for (const auto& f : faces_)
        for (const auto& v : f.loop)
            if (std::none_of(out.begin(), out.end(), [&](Vec3 q) { return norm(q - v) <= eps; })) out.push_back(v);
    return out;
}

IntersectionSummary convex_intersection(Vec3 offset, const PolytopeP& P, const Tolerance& tol) {
    // Clipping tolerance is kept above the rounding noise of the clip points.
    const double eps = std::max(tol.eps, 1e-9);
    auto poly = ConvexPolyhedron::from_polytope(P);
    for (const auto& f : P.faces) {
        poly.clip(f.normal, f.offset + dot(f.normal, offset), eps);
        if (poly.empty()) return {};
    }
    const double vol = poly.volume();
    if (!(vol > kVolumeFloor)) return {0, std::max(0.0, vol)};
    return {poly.face_count(eps), vol};
}

}  // namespace qc
