#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "qc/errors.hpp"
#include "qc/geometry.hpp"

using namespace qc;

namespace {

Label rotate_coordinates(const Label& k) {  // new coordinate j+1 takes old coordinate j
    Label r;
    for (std::size_t j = 0; j < 5; ++j) r.k[(j + 1) % 5] = k.k[j];
    return r;
}

bool near(Vec2 a, Vec2 b, double eps = 1e-12) { return norm(a - b) <= eps; }
bool near(Vec3 a, Vec3 b, double eps = 1e-12) { return norm(a - b) <= eps; }

std::vector<Vec2> regular_polygon(int n, double radius, double phase = 0.0) {
    std::vector<Vec2> v;
    for (int i = 0; i < n; ++i) v.push_back(rotate({radius, 0.0}, phase + 2.0 * std::numbers::pi * i / n));
    return v;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("golden constants satisfy their defining identities") {
    using G = GoldenConstants;
    CHECK(G::p == doctest::Approx((std::sqrt(5.0) + 1.0) / 2.0).epsilon(1e-15));
    CHECK(std::abs((G::p - 1.0) - G::p_inv) < 1e-15);
    CHECK(std::abs(G::p * G::p - (G::p + 1.0)) < 1e-15);
    CHECK(std::abs(G::p_inv4 - std::pow(G::p, -4)) < 1e-15);
    CHECK(std::abs(G::theta - 2.0 * std::numbers::pi / 5.0) < 1e-15);
}

TEST_CASE("basis vectors are the fifth roots of unity and their lifts") {
    const auto b = make_basis();
    CHECK(b.d[0] == Vec2{1.0, 0.0});
    CHECK(near(b.w[0], Vec3{1.0, 0.0, 1.0}));
    for (int j = 0; j < 5; ++j) {
        CHECK(near(b.d[static_cast<std::size_t>(j)], oracle::d(j)));
        CHECK(near(b.w[static_cast<std::size_t>(j)], oracle::w(j)));
        CHECK(std::abs(norm(b.d[static_cast<std::size_t>(j)]) - 1.0) < 1e-15);
        CHECK(near(b.d2(j), oracle::d(2 * j)));
    }
    Vec2 sd;
    Vec3 sw;
    for (int j = 0; j < 5; ++j) {
        sd = sd + b.d[static_cast<std::size_t>(j)];
        sw = sw + b.w[static_cast<std::size_t>(j)];
    }
    CHECK(norm(sd) < 1e-9);
    CHECK(near(sw, Vec3{0, 0, 5}, 1e-9));
}

TEST_CASE("plane and space projections are orthogonal") {
    const auto b = make_basis();
    // (D^T W)_{ab} = sum_j d_j[a] w_j[b]
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 3; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < 5; ++j) {
                const double da = a == 0 ? b.d[j].x : b.d[j].y;
                const double wc = c == 0 ? b.w[j].x : (c == 1 ? b.w[j].y : b.w[j].z);
                s += da * wc;
            }
            CHECK(std::abs(s) < 1e-9);
        }
}

TEST_CASE("project_2d and project_3d on simple labels") {
    const auto b = make_basis();
    CHECK(near(project_2d(Label{}, b), Vec2{}));
    CHECK(near(project_2d(Label::diagonal(), b), Vec2{}, 1e-12));
    CHECK(near(project_2d(Label::unit(0), b), Vec2{1, 0}));
    CHECK(near(project_3d(Label{}, b), Vec3{}));
    CHECK(near(project_3d(Label::diagonal(), b), Vec3{0, 0, 5}, 1e-12));
    CHECK(near(project_3d(Label::unit(0), b), Vec3{1, 0, 1}));
}

TEST_CASE("project_3d height is the exact index") {
    const auto b = make_basis();
    oracle::Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const Label k = rng.label(-1000, 1000);
        CHECK(project_3d(k, b).z == static_cast<double>(k.index()));
    }
}

TEST_CASE("cyclic relabelling rotates the projections") {
    // Moving coordinate j to j+1 turns d_j into d_{j+1} (a turn by theta) and
    // d_{2j} into d_{2j+2} (a turn by 2 theta).
    const auto b = make_basis();
    const double t = GoldenConstants::theta;
    oracle::Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        const Label k = rng.label(-20, 20);
        const Label r = rotate_coordinates(k);
        CHECK(near(project_2d(r, b), rotate(project_2d(k, b), t), 1e-9));
        const Vec3 p = project_3d(k, b), q = project_3d(r, b);
        CHECK(near(q.xy(), rotate(p.xy(), 2.0 * t), 1e-9));
        CHECK(q.z == p.z);
        // The opposite relabelling turns the other way.
        Label back;
        for (std::size_t j = 0; j < 5; ++j) back.k[j] = k.k[(j + 1) % 5];
        CHECK(near(project_2d(back, b), rotate(project_2d(k, b), -t), 1e-9));
        CHECK(near(project_3d(back, b).xy(), rotate(p.xy(), -2.0 * t), 1e-9));
    }
}

TEST_CASE("Tolerance must be positive") {
    CHECK_NOTHROW(Tolerance(1e-12));
    CHECK_THROWS_AS(Tolerance(0.0), DomainError);
    CHECK_THROWS_AS(Tolerance(-1.0), DomainError);
    CHECK(Tolerance{}.eps == 1e-9);
}

TEST_CASE("point_in_convex_polygon: inside, vertex, far outside") {
    const auto pent = regular_polygon(5, 1.0);
    CHECK(point_in_convex_polygon({0, 0}, pent, 1e-9) == Location::Inside);
    for (const auto& v : pent) CHECK(point_in_convex_polygon(v, pent, 1e-9) == Location::Boundary);
    const auto dec = regular_polygon(10, GoldenConstants::p);
    CHECK(point_in_convex_polygon({2.0 * GoldenConstants::p, 0}, dec, 1e-9) == Location::Outside);
    // Within eps of an edge counts as boundary from both sides.
    const Vec2 mid = 0.5 * (pent[0] + pent[1]);
    const Vec2 out = (1.0 / norm(mid)) * mid;
    CHECK(point_in_convex_polygon(mid + 5e-10 * out, pent, 1e-9) == Location::Boundary);
    CHECK(point_in_convex_polygon(mid - 5e-10 * out, pent, 1e-9) == Location::Boundary);
    CHECK(point_in_convex_polygon(mid + 2e-9 * out, pent, 1e-9) == Location::Outside);
    CHECK(point_in_convex_polygon(mid - 2e-9 * out, pent, 1e-9) == Location::Inside);
}

TEST_CASE("point_in_convex_polygon rejects malformed polygons") {
    std::vector<Vec2> two{{0, 0}, {1, 0}};
    CHECK_THROWS_AS(point_in_convex_polygon({0, 0}, two, 1e-9), MalformedPolygonError);
    auto cw = regular_polygon(5, 1.0);
    std::reverse(cw.begin(), cw.end());
    CHECK_THROWS_AS(ConvexPolygon{cw}, MalformedPolygonError);
    std::vector<Vec2> dart{{0, 0}, {2, 0}, {0.5, 0.5}, {0, 2}};
    CHECK_THROWS_AS(ConvexPolygon{dart}, MalformedPolygonError);
}

TEST_CASE("point_in_convex_polygon does not depend on the starting vertex") {
    const auto dec = regular_polygon(10, GoldenConstants::p, 0.1);
    oracle::Rng rng(13);
    for (int i = 0; i < 300; ++i) {
        const Vec2 pt{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const auto expect = point_in_convex_polygon(pt, dec, 1e-9);
        auto rot = dec;
        for (int s = 1; s < 10; ++s) {
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
            CHECK(point_in_convex_polygon(pt, rot, 1e-9) == expect);
        }
    }
}

TEST_CASE("ConvexPolygon area and centroid") {
    const ConvexPolygon sq({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    CHECK(sq.area() == doctest::Approx(4.0));
    CHECK(near(sq.centroid(), Vec2{1, 1}));
    const ConvexPolygon dec(regular_polygon(10, GoldenConstants::p));
    CHECK(dec.area() == doctest::Approx(5.0 * GoldenConstants::p * GoldenConstants::p * std::sin(std::numbers::pi / 5)));
}

TEST_CASE("convex_hull_2d drops interior, duplicate and collinear points") {
    std::vector<Vec2> pts{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}, {2, 2 + 1e-12}, {0, 1}};
    const auto h = convex_hull_2d(pts, 1e-9);
    REQUIRE(h.size() == 4);
    CHECK(ConvexPolygon(h).area() == doctest::Approx(4.0));
}

TEST_CASE("Label arithmetic and ordering") {
    const Label a{{1, 2, 3, 4, 5}};
    CHECK(a.index() == 15);
    CHECK((a + Label::diagonal()).index() == 20);
    CHECK(a - a == Label{});
    CHECK(Label{{0, 0, 0, 0, 1}} < Label{{0, 0, 0, 1, 0}});
    CHECK(a.to_string() == "(1,2,3,4,5)");
    CHECK(LabelHash{}(a) == LabelHash{}(Label{{1, 2, 3, 4, 5}}));
}

}
