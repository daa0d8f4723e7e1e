#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qc/errors.hpp"
#include "qc/pentagrid.hpp"
#include "qc/window.hpp"

using namespace qc;
using G = GoldenConstants;

namespace {

const WindowGeometry& geo() {
    static const WindowGeometry g = make_window_geometry();
    return g;
}

Label ceilings_2d(Vec2 r, const std::array<double, 5>& g) {
    Label k;
    for (int j = 0; j < 5; ++j) {
        const Vec2 d = oracle::d(j);
        k.k[static_cast<std::size_t>(j)] = static_cast<int>(std::ceil(d.x * r.x + d.y * r.y + g[static_cast<std::size_t>(j)]));
    }
    return k;
}

Label ceilings_3d(Vec3 R, const std::array<double, 5>& g) {
    Label k;
    for (int j = 0; j < 5; ++j)
        k.k[static_cast<std::size_t>(j)] = static_cast<int>(std::ceil(dot(oracle::w(j), R) + g[static_cast<std::size_t>(j)]));
    return k;
}

GridShift uniform_shift(double v) {
    GridShift s;
    s.gamma.fill(v);
    s.c = 5 * v - std::floor(5 * v);
    return s;
}

}  // namespace

TEST_SUITE("pentagrid") {

TEST_CASE("k_vector_2d on simple points") {
    const Tolerance tol;
    CHECK(k_vector_2d({0, 0}, uniform_shift(0.5), geo().basis, tol) == Label::diagonal());
    CHECK(k_vector_2d({0, 0}, uniform_shift(-0.5), geo().basis, tol) == Label{});
    GridShift s;
    s.gamma = {0.1, 0.2, 0.3, 0.25, 0.15};
    CHECK(k_vector_2d({10.3, 4.7}, s, geo().basis, tol) == ceilings_2d({10.3, 4.7}, s.gamma));
}

TEST_CASE("k_vector_2d and k_vector_3d match direct evaluation") {
    const Tolerance tol;
    oracle::Rng rng(41);
    for (int i = 0; i < 3000; ++i) {
        GridShift s;
        s.gamma = rng.gamma();
        const Vec2 r{rng.uniform(-50, 50), rng.uniform(-50, 50)};
        const Vec3 R{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-50, 50)};
        CHECK(k_vector_2d(r, s, geo().basis, tol) == ceilings_2d(r, s.gamma));
        CHECK(k_vector_3d(R, s, geo().basis, tol) == ceilings_3d(R, s.gamma));
    }
}

TEST_CASE("k_vector_3d on the z axis") {
    const Tolerance tol;
    CHECK(k_vector_3d({0, 0, 0}, uniform_shift(0.5), geo().basis, tol) == Label::diagonal());
    GridShift s;
    s.gamma = {0.1, 0.2, 0.3, 0.25, 0.15};
    for (double z : {-3.37, 0.41, 2.71}) {
        const Label k = k_vector_3d({0, 0, z}, s, geo().basis, tol);
        for (std::size_t j = 0; j < 5; ++j) CHECK(k.k[j] == static_cast<int>(std::ceil(z + s.gamma[j])));
    }
}

TEST_CASE("k vectors refuse points on grid lines") {
    const Tolerance tol;
    CHECK_THROWS_AS(k_vector_2d({0, 0}, uniform_shift(0.0), geo().basis, tol), SingularError);
    CHECK_THROWS_AS(k_vector_3d({0, 0, 0}, uniform_shift(0.0), geo().basis, tol), SingularError);
}

TEST_CASE("k_vector_2d is constant inside a mesh") {
    const Tolerance tol;
    oracle::Rng rng(42);
    GridShift s;
    s.gamma = rng.gamma();
    for (int i = 0; i < 2000; ++i) {
        const Vec2 r{rng.uniform(-20, 20), rng.uniform(-20, 20)};
        const Label k = k_vector_2d(r, s, geo().basis, tol);
        const Vec2 q = r + Vec2{1e-7, -1e-7};
        // Same mesh unless a grid line separates them.
        bool crosses = false;
        for (int j = 0; j < 5; ++j) {
            const Vec2 d = oracle::d(j);
            const double a = d.x * r.x + d.y * r.y + s.gamma[static_cast<std::size_t>(j)];
            const double b = d.x * q.x + d.y * q.y + s.gamma[static_cast<std::size_t>(j)];
            crosses |= std::ceil(a) != std::ceil(b);
        }
        if (!crosses) CHECK(k_vector_2d(q, s, geo().basis, tol) == k);
    }
}

TEST_CASE("intersections solve both line equations and appear once") {
    oracle::Rng rng(43);
    GridShift s = normalize_shift(rng.gamma());
    const auto xs = enumerate_intersections(PlaneBox::centered(6), s, geo().basis, Tolerance{});
    REQUIRE(!xs.empty());
    std::set<std::tuple<int, long, int, long>> keys;
    for (const auto& x : xs) {
        CHECK(x.a.family < x.b.family);
        CHECK(std::abs(x.a.value(x.r, s, geo().basis)) < 1e-9);
        CHECK(std::abs(x.b.value(x.r, s, geo().basis)) < 1e-9);
        CHECK(PlaneBox::centered(6).contains(x.r));
        keys.insert({x.a.family, x.a.k, x.b.family, x.b.k});
    }
    CHECK(keys.size() == xs.size());
    CHECK(std::is_sorted(xs.begin(), xs.end()));
    std::set<std::pair<int, int>> pairs;
    for (const auto& x : xs) pairs.insert({x.a.family, x.b.family});
    CHECK(pairs.size() == 10);  // no two families are parallel
}

TEST_CASE("intersection count grows with the area of the box") {
    oracle::Rng rng(44);
    const GridShift s = normalize_shift(rng.gamma());
    std::vector<double> density;
    for (double h : {10.0, 20.0, 40.0}) {
        const auto n = enumerate_intersections(PlaneBox::centered(h), s, geo().basis, Tolerance{}).size();
        density.push_back(static_cast<double>(n) / (4 * h * h));
    }
    // Each family pair (s, t) crosses |sin| / 1 times per unit area:
    // sum over pairs of |sin((t - s) theta)| = 5 (sin theta + sin 2 theta).
    const double expect = 5.0 * (std::sin(G::theta) + std::sin(2 * G::theta));
    for (double d : density) CHECK(d == doctest::Approx(expect).epsilon(0.05));
    CHECK(std::abs(density[2] - expect) < std::abs(density[0] - expect) + 0.05);
}

TEST_CASE("crossing of the zero lines of families 0 and 1") {
    GridShift s;
    for (int j = 0; j < 5; ++j) s.gamma[static_cast<std::size_t>(j)] = j / 10.0;
    s = normalize_shift(s.gamma);
    CHECK(s.c == doctest::Approx(0.0).epsilon(1e-12));
    const auto xs = enumerate_intersections(PlaneBox::centered(3), s, geo().basis, Tolerance{});
    auto it = std::find_if(xs.begin(), xs.end(), [](const Intersection& x) {
        return x.a.family == 0 && x.b.family == 1 && x.a.k == 0 && x.b.k == 0;
    });
    // gamma_0 was shifted by -1 in normalization, so the k = 0 line of family 0
    // is d_0 . r = 1 - 0.
    REQUIRE(it != xs.end());
    for (const auto& line : {it->a, it->b})
        CHECK(std::abs(line.value(it->r, s, geo().basis)) < 1e-12);
}

TEST_CASE("a grid with all offsets equal is singular") {
    GridShift s;  // every family has a line through the origin
    try {
        enumerate_intersections(PlaneBox::centered(2), s, geo().basis, Tolerance{});
        FAIL("expected a singular grid");
    } catch (const SingularError& e) {
        CHECK(std::string(e.what()).find("family") != std::string::npos);
    }
}

TEST_CASE("rhombi have unit edges along their two families") {
    oracle::Rng rng(45);
    const GridShift s = normalize_shift(rng.gamma());
    const auto xs = enumerate_intersections(PlaneBox::centered(5), s, geo().basis, Tolerance{});
    int thin = 0, fat = 0;
    for (const auto& x : xs) {
        const auto rh = rhombus_at(x, s, geo().basis, Tolerance{});
        CHECK(rh.s == x.a.family);
        CHECK(rh.t == x.b.family);
        const Label es = Label::unit(rh.s), et = Label::unit(rh.t);
        CHECK(rh.labels[1] - rh.labels[0] == es);
        CHECK(rh.labels[2] - rh.labels[1] == et);
        CHECK(rh.labels[2] - rh.labels[3] == es);
        CHECK(rh.labels[3] - rh.labels[0] == et);
        for (int i = 0; i < 4; ++i) {
            const Vec2 e = rh.vertices[static_cast<std::size_t>((i + 1) % 4)] - rh.vertices[static_cast<std::size_t>(i)];
            CHECK(std::abs(norm(e) - 1.0) < 1e-12);
            const Vec2 ds = oracle::d(rh.s), dt = oracle::d(rh.t);
            const bool along = norm(e - ds) < 1e-9 || norm(e + ds) < 1e-9 || norm(e - dt) < 1e-9 || norm(e + dt) < 1e-9;
            CHECK(along);
        }
        const double a = rh.acute_angle();
        const bool shape = std::abs(a - G::theta) < 1e-12 || std::abs(a - G::theta / 2) < 1e-12;
        CHECK(shape);
        (rh.thin() ? thin : fat) += 1;
        const int gap = rh.t - rh.s;
        CHECK(rh.thin() == (gap == 2 || gap == 3));
    }
    CHECK(thin > 0);
    CHECK(fat > 0);
    // Fat rhombi outnumber thin ones by the golden ratio.
    CHECK(static_cast<double>(fat) / thin == doctest::Approx(G::p).epsilon(0.05));
}

TEST_CASE("pentagrid tiling vertices have index 1..5, and never 5 when c = 0") {
    oracle::Rng rng(46);
    for (double c : {0.0, 0.3, 0.8}) {
        auto g = rng.gamma();
        const GridShift s = shift_with_sum(g, c);
        const auto t = tiling_from_pentagrid(PlaneBox::centered(8), s, geo().basis, Tolerance{});
        CHECK(std::is_sorted(t.vertices.begin(), t.vertices.end()));
        CHECK(std::adjacent_find(t.vertices.begin(), t.vertices.end()) == t.vertices.end());
        std::set<int> indices;
        for (const auto& k : t.vertices) indices.insert(k.index());
        CHECK(*indices.begin() >= 1);
        CHECK(*indices.rbegin() <= (c == 0.0 ? 4 : 5));
    }
}

TEST_CASE("pentagrid and window method give the same vertices") {
    oracle::Rng rng(47);
    for (double c : {0.1, 0.5, G::p_inv2, 0.9}) {
        const double h = 10.0, margin = 2.0;
        // Redraw the rare shifts whose grid has a near-triple crossing in the box.
        GridShift s;
        PentagridTiling t;
        for (int attempt = 0;; ++attempt) {
            REQUIRE(attempt < 16);
            s = shift_with_sum(rng.gamma(), c);
            try {
                t = tiling_from_pentagrid(PlaneBox::centered(h), s, geo().basis, Tolerance{});
                break;
            } catch (const SingularError&) {
            }
        }
        const WindowSet ws(geo(), s.c);
        const auto win = accepted_labels_2d(LabelBox{17}, s, ws, geo());
        auto inner = [&](const std::vector<Label>& v) {
            std::vector<Label> out;
            for (const auto& k : v)
                if (PlaneBox::centered(h).contains(mesh_center(k, s, geo().basis), margin)) out.push_back(k);
            return out;
        };
        const auto a = inner(t.vertices), b = inner(win);
        CHECK(a.size() > 200);
        CHECK(a == b);
        // Every pentagrid vertex is accepted.
        for (const auto& k : t.vertices) CHECK(accept_2d(k, s, ws, geo()).decision == Decision::Accept);
    }
}

TEST_CASE("mesh centres lie close to their meshes") {
    oracle::Rng rng(48);
    const GridShift s = normalize_shift(rng.gamma());
    for (int i = 0; i < 2000; ++i) {
        const Vec2 r{rng.uniform(-30, 30), rng.uniform(-30, 30)};
        const Label k = k_vector_2d(r, s, geo().basis, Tolerance{});
        CHECK(norm(mesh_center(k, s, geo().basis) - r) <= 2.0 * G::p / 5.0 + 1e-12);
    }
}

TEST_CASE("parallel and serial pentagrid runs agree") {
    oracle::Rng rng(49);
    const GridShift s = normalize_shift(rng.gamma());
    const auto a = enumerate_intersections(PlaneBox::centered(12), s, geo().basis, Tolerance{}, 1);
    const auto b = enumerate_intersections(PlaneBox::centered(12), s, geo().basis, Tolerance{}, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].r == b[i].r);
        CHECK(a[i].a.k == b[i].a.k);
        CHECK(a[i].b.k == b[i].b.k);
    }
    const auto ta = tiling_from_pentagrid(PlaneBox::centered(12), s, geo().basis, Tolerance{}, 1);
    const auto tb = tiling_from_pentagrid(PlaneBox::centered(12), s, geo().basis, Tolerance{}, 3);
    CHECK(ta.vertices == tb.vertices);
}

}
