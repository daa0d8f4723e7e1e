#include "qc/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "qc/errors.hpp"

namespace qc {

std::string Label::to_string() const {
    std::ostringstream os;
    os << '(' << k[0] << ',' << k[1] << ',' << k[2] << ',' << k[3] << ',' << k[4] << ')';
    return os.str();
}

Tolerance::Tolerance(double e) : eps(e) {
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("tolerance must be a positive finite number");
}

ProjectionBasis make_basis() {
    ProjectionBasis b;
    for (int j = 0; j < 5; ++j) {
        const double a = j * GoldenConstants::theta;
        b.d[static_cast<std::size_t>(j)] = {std::cos(a), std::sin(a)};
    }
    // j = 0 must be exact so that d_0 = (1, 0).
    b.d[0] = {1.0, 0.0};
    for (int j = 0; j < 5; ++j) {
        const Vec2 v = b.d2(j);
        b.w[static_cast<std::size_t>(j)] = {v.x, v.y, 1.0};
    }
    return b;
}

Vec2 project_2d(const Label& k, const ProjectionBasis& basis) {
    Vec2 r;
    for (std::size_t j = 0; j < 5; ++j) r = r + static_cast<double>(k.k[j]) * basis.d[j];
    return r;
}

Vec3 project_3d(const Label& k, const ProjectionBasis& basis) {
    Vec2 xy;
    for (int j = 0; j < 5; ++j) xy = xy + static_cast<double>(k[static_cast<std::size_t>(j)]) * basis.d2(j);
    return {xy.x, xy.y, static_cast<double>(k.index())};
}

Vec2 window_point_2d(const Label& k, std::span<const double, 5> gamma, const ProjectionBasis& basis) {
    double x = 0.0, y = 0.0;
    for (int j = 0; j < 5; ++j) {
        const auto u = static_cast<std::size_t>(j);
        const double t = static_cast<double>(k.k[u]) - gamma[u];
        const Vec2 a = basis.d2(j);
        x = x + t * a.x;
        y = y + t * a.y;
    }
    return {x, y};
}

Vec2 window_point_3d(const Label& k, std::span<const double, 5> gamma, const ProjectionBasis& basis) {
    double x = 0.0, y = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
        const double t = static_cast<double>(k.k[j]) - gamma[j];
        x = x + t * basis.d[j].x;
        y = y + t * basis.d[j].y;
    }
    return {x, y};
}

const char* to_string(Location loc) {
    switch (loc) {
        case Location::Inside: return "inside";
        case Location::Outside: return "outside";
        case Location::Boundary: return "boundary";
    }
    return "?";
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> ccw_vertices) : vertices_(std::move(ccw_vertices)) {
    const std::size_t n = vertices_.size();
    if (n < 3) throw MalformedPolygonError("convex polygon needs at least 3 vertices, got " + std::to_string(n));
    edges_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices_[i];
        const Vec2 b = vertices_[(i + 1) % n];
        const Vec2 c = vertices_[(i + 2) % n];
        if (cross(b - a, c - b) <= 0.0) throw MalformedPolygonError("polygon is not strictly convex and counterclockwise");
        const Vec2 e = b - a;
        const double len = norm(e);
        const Vec2 nrm{e.y / len, -e.x / len};
        edges_.push_back({nrm, dot(nrm, a)});
    }
}

double ConvexPolygon::area() const {
    double s = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) s += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
    return 0.5 * s;
}

Vec2 ConvexPolygon::centroid() const {
    Vec2 c;
    for (auto v : vertices_) c = c + v;
    return (1.0 / static_cast<double>(vertices_.size())) * c;
}

double ConvexPolygon::max_edge_distance(Vec2 pt) const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& e : edges_) m = std::max(m, e.signed_distance(pt));
    return m;
}

Location ConvexPolygon::locate(Vec2 pt, double eps) const {
    const double m = max_edge_distance(pt);
    if (m < -eps) return Location::Inside;
    if (m > eps) return Location::Outside;
    return Location::Boundary;
}

Location point_in_convex_polygon(Vec2 pt, std::span<const Vec2> polygon, double eps) {
    return ConvexPolygon(std::vector<Vec2>(polygon.begin(), polygon.end())).locate(pt, eps);
}

std::vector<Vec2> convex_hull_2d(std::vector<Vec2> pts, double eps) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    std::vector<Vec2> uniq;
    for (auto p : pts) {
        bool dup = false;
        for (auto q : uniq) {
            if (norm(p - q) <= eps) {
                dup = true;
                break;
            }
        }
        if (!dup) uniq.push_back(p);
    }
    if (uniq.size() < 3) return uniq;
    // Andrew's monotone chain; collinearity judged by distance to the chord.
    auto turns_left = [eps](Vec2 o, Vec2 a, Vec2 b) {
        const double len = norm(b - o);
        return len > 0.0 && cross(a - o, b - o) / len > eps;
    };
    std::vector<Vec2> hull(2 * uniq.size());
    std::size_t h = 0;
    for (auto p : uniq) {
        while (h >= 2 && !turns_left(hull[h - 2], hull[h - 1], p)) --h;
        hull[h++] = p;
    }
    for (std::size_t i = uniq.size() - 1, lo = h + 1; i-- > 0;) {
        const Vec2 p = uniq[i];
        while (h >= lo && !turns_left(hull[h - 2], hull[h - 1], p)) --h;
        hull[h++] = p;
    }
    hull.resize(h - 1);
    return hull;
}

}  // namespace qc
