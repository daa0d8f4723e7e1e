#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace qc {

// Golden ratio and the powers of its inverse that appear in window sizes and
// frequency formulas.
struct GoldenConstants {
    static constexpr double p = std::numbers::phi;
    static constexpr double p_inv = 1.0 / p;
    static constexpr double p_inv2 = p_inv * p_inv;
    static constexpr double p_inv3 = p_inv2 * p_inv;
    static constexpr double p_inv4 = p_inv3 * p_inv;
    static constexpr double theta = 2.0 * std::numbers::pi / 5.0;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 rotate(Vec2 a, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(Vec3, Vec3) = default;

    Vec2 xy() const { return {x, y}; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// A point of the five-dimensional integer lattice.
struct Label {
    std::array<int, 5> k{};

    int index() const { return k[0] + k[1] + k[2] + k[3] + k[4]; }
    int operator[](std::size_t j) const { return k[j]; }
    int& operator[](std::size_t j) { return k[j]; }

    static Label unit(int m) {
        Label e;
        e.k[static_cast<std::size_t>(m)] = 1;
        return e;
    }
    static Label diagonal() { return Label{{1, 1, 1, 1, 1}}; }

    friend Label operator+(Label a, const Label& b) {
        for (std::size_t j = 0; j < 5; ++j) a.k[j] += b.k[j];
        return a;
    }
    friend Label operator-(Label a, const Label& b) {
        for (std::size_t j = 0; j < 5; ++j) a.k[j] -= b.k[j];
        return a;
    }
    friend auto operator<=>(const Label&, const Label&) = default;
    friend bool operator==(const Label&, const Label&) = default;

    std::string to_string() const;
};

struct LabelHash {
    std::size_t operator()(const Label& l) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (int v : l.k) {
            h ^= static_cast<std::uint32_t>(v);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

struct Tolerance {
    double eps = 1e-9;

    explicit Tolerance(double e = 1e-9);
};

// Generators of the physical plane (d) and of the orthogonal space (w).
struct ProjectionBasis {
    std::array<Vec2, 5> d;
    std::array<Vec3, 5> w;

    // d_{(2j) mod 5}: the xy part of w_j.
    Vec2 d2(int j) const { return d[static_cast<std::size_t>((2 * j) % 5)]; }
};

ProjectionBasis make_basis();

// Sum_j k_j d_j.
Vec2 project_2d(const Label& k, const ProjectionBasis& basis);
// Sum_j k_j w_j; z is the exact index of k.
Vec3 project_3d(const Label& k, const ProjectionBasis& basis);

// Orthogonal-space test points used by the acceptance predicates.
// window_point_2d: Sum_j (k_j - gamma_j) d_{2j}, compared against slice V_I.
Vec2 window_point_2d(const Label& k, std::span<const double, 5> gamma, const ProjectionBasis& basis);
// window_point_3d: D^T (k - gamma), compared against the decagon.
Vec2 window_point_3d(const Label& k, std::span<const double, 5> gamma, const ProjectionBasis& basis);

enum class Location { Inside, Outside, Boundary };

const char* to_string(Location loc);

// Edge of a convex polygon as an outward half-plane n.x <= offset with |n| = 1.
struct HalfPlane {
    Vec2 normal;
    double offset = 0.0;

    double signed_distance(Vec2 pt) const { return (normal.x * pt.x + normal.y * pt.y) - offset; }
};

// Convex polygon, vertices counterclockwise, with cached edge half-planes.
class ConvexPolygon {
public:
    ConvexPolygon() = default;
    // Throws MalformedPolygonError for fewer than 3 vertices or a non-convex /
    // clockwise vertex list.
    explicit ConvexPolygon(std::vector<Vec2> ccw_vertices);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<HalfPlane>& edges() const { return edges_; }
    std::size_t size() const { return vertices_.size(); }
    bool empty() const { return vertices_.empty(); }

    double area() const;
    Vec2 centroid() const;
    // Largest signed edge distance; negative inside.
    double max_edge_distance(Vec2 pt) const;
    Location locate(Vec2 pt, double eps) const;

private:
    std::vector<Vec2> vertices_;
    std::vector<HalfPlane> edges_;
};

Location point_in_convex_polygon(Vec2 pt, std::span<const Vec2> polygon, double eps);

// Counterclockwise hull; points within eps of each other are merged and
// vertices within eps of the line through their neighbours are dropped.
std::vector<Vec2> convex_hull_2d(std::vector<Vec2> pts, double eps);

}  // namespace qc
