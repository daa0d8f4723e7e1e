#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "oracles.hpp"
#include "qc/errors.hpp"
#include "qc/lattice3d.hpp"
#include "qc/polyhedron.hpp"

using namespace qc;
using G = GoldenConstants;

namespace {

const WindowGeometry& geo() {
    static const WindowGeometry g = make_window_geometry();
    return g;
}

GridShift shift(std::uint64_t seed) { return normalize_shift(oracle::Rng(seed).gamma()); }

struct Space {
    GridShift shift;
    Lattice3 L;
    std::vector<Label> tips;
};

Space space(std::uint64_t seed, int radius) {
    const auto s = shift(seed);
    auto L = build_lattice3(LabelBox{radius}, s, geo());
    auto tips = find_tips(L, s, geo());
    return {s, std::move(L), std::move(tips)};
}

double det5(std::array<std::array<double, 5>, 5> a) {
    double det = 1.0;
    for (std::size_t c = 0; c < 5; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < 5; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < 5; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < 5; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

}  // namespace

TEST_SUITE("lattice3d") {

TEST_CASE("lattice membership follows the zonogon test") {
    const auto s = shift(71);
    const auto L = build_lattice3(LabelBox{4}, s, geo());
    const auto gens = oracle::d_generators();
    std::size_t n = 0;
    for (const auto& k : L.labels()) {
        Vec2 t{};
        for (int j = 0; j < 5; ++j) t = t + (k.k[static_cast<std::size_t>(j)] - s.gamma[static_cast<std::size_t>(j)]) * oracle::d(j);
        CHECK(oracle::zonogon_margin(gens, t) < 0);
        CHECK(L.point(k).has_value());
        CHECK(norm(*L.point(k) - project_3d(k, geo().basis)) < 1e-12);
        ++n;
    }
    CHECK(n == L.size());
    CHECK(std::is_sorted(L.labels().begin(), L.labels().end()));
    CHECK_FALSE(L.point(Label{{99, 0, 0, 0, 0}}).has_value());
}

TEST_CASE("lattice is periodic along the diagonal") {
    const auto sp = space(72, 6);
    for (const auto& k : sp.L.labels()) {
        if (!LabelBox{6}.contains(k, 1)) continue;
        CHECK(sp.L.contains(k + Label::diagonal()));
        CHECK(sp.L.contains(k - Label::diagonal()));
        CHECK(norm(project_3d(k + Label::diagonal(), geo().basis) - project_3d(k, geo().basis) - Vec3{0, 0, 5}) < 1e-12);
    }
}

TEST_CASE("lattice density matches window area over the lattice covolume") {
    std::array<std::array<double, 5>, 5> m{};
    for (std::size_t j = 0; j < 5; ++j) {
        const Vec3 w = oracle::w(static_cast<int>(j));
        const Vec2 d = oracle::d(static_cast<int>(j));
        m[0][j] = w.x, m[1][j] = w.y, m[2][j] = w.z, m[3][j] = d.x, m[4][j] = d.y;
    }
    const double det = std::abs(det5(m));
    CHECK(det == doctest::Approx(25.0 * std::sqrt(5.0) / 4.0).epsilon(1e-12));
    const double area_q = 5.0 * oracle::kPhi * oracle::kPhi * std::sin(std::numbers::pi / 5.0);
    CHECK(geo().Q.hull.area() == doctest::Approx(area_q).epsilon(1e-12));
    const double expect = area_q / det;

    // Every lattice point with |xy| < 6 and |z| < 14 has |k_j| <= 6 + small.
    const auto s = shift(73);
    const auto L = build_lattice3(LabelBox{10}, s, geo());
    const double rad = 6.0, half = 14.0;
    std::size_t n = 0;
    for (const auto& p : L.points())
        if (std::hypot(p.x, p.y) < rad && std::abs(p.z) < half) ++n;
    const double density = static_cast<double>(n) / (std::numbers::pi * rad * rad * 2 * half);
    CHECK(density == doctest::Approx(expect).epsilon(0.04));
}

TEST_CASE("tips: test points strictly inside the inner decagon, ten lattice neighbours") {
    const auto sp = space(74, 7);
    REQUIRE(sp.tips.size() > 100);
    CHECK(std::is_sorted(sp.tips.begin(), sp.tips.end()));
    const auto gens = oracle::d_generators();
    for (const auto& t : sp.tips) {
        const Vec2 q = window_point_3d(t, sp.shift.values(), geo().basis);
        CHECK(norm(q) < G::p_inv + 1e-12);
        CHECK(geo().Q.inner.locate(q, 1e-12) == Location::Inside);
        CHECK(oracle::zonogon_margin(gens, q) < 0);
        if (!LabelBox{7}.contains(t, 1)) continue;
        for (int m = 0; m < 5; ++m) {
            CHECK(sp.L.contains(t + Label::unit(m)));
            CHECK(sp.L.contains(t - Label::unit(m)));
        }
    }
    // Tips are z-periodic.
    const std::set<Label> all(sp.tips.begin(), sp.tips.end());
    for (const auto& t : sp.tips)
        if (LabelBox{7}.contains(t, 1)) CHECK(all.count(t + Label::diagonal()) == 1);
}

TEST_CASE("cell stencil shape") {
    const auto& st = cell_stencil(geo());
    CHECK(st.interior.size() == 10);
    CHECK(st.boundary.size() == 22);
    CHECK(st.hull_vertices.size() == 22);
    CHECK(st.reach == 1);
    for (const auto& m : st.interior) CHECK(geo().P.locate(project_3d(m, geo().basis), 1e-9) == Location::Inside);
    for (const auto& m : st.hull_vertices) CHECK(geo().P.locate(project_3d(m, geo().basis), 1e-9) == Location::Boundary);
}

TEST_CASE("every cell has 22 hull atoms and 4 interior atoms") {
    const auto sp = space(75, 7);
    const int reach = cell_stencil(geo()).reach;
    std::size_t seen = 0;
    std::map<int, std::set<std::vector<Label>>> by_triangle;
    for (const auto& t : sp.tips) {
        if (!LabelBox{7}.contains(t, reach)) continue;
        const auto cell = cell_at(t, sp.L, sp.shift, geo());
        CHECK(cell.hull_atoms.size() == 22);
        CHECK(cell.interior_atoms.size() == 4);
        CHECK(cell.atom_count() == 26);
        CHECK(cell.triangle >= 0);
        CHECK(cell.triangle < 10);
        std::vector<Label> rel;
        for (const auto& a : cell.interior_atoms) {
            rel.push_back(a - t);
            // Interior atoms lie strictly inside the translated window polytope.
            CHECK(oracle::zonotope_margin(oracle::w_generators(), project_3d(a - t, geo().basis)) < -1e-9);
        }
        std::sort(rel.begin(), rel.end());
        by_triangle[cell.triangle].insert(rel);
        CHECK(cell_atoms(t, sp.L, geo()).size() == 26);
        ++seen;
    }
    CHECK(seen > 200);
    // The four interior atoms are fixed by the triangle of the tip's test point.
    CHECK(by_triangle.size() == 10);
    for (const auto& [tri, sets] : by_triangle) CHECK(sets.size() == 1);
}

TEST_CASE("interior_atoms refuses labels that are not tips") {
    const auto sp = space(76, 5);
    CHECK_THROWS_AS(interior_atoms(Label{{50, 0, 0, 0, 0}}, sp.L, geo()), ConsistencyError);
}

TEST_CASE("convex_intersection of P with its translates") {
    const auto& P = geo().P;
    const auto self = convex_intersection({0, 0, 0}, P, geo().tol);
    CHECK(self.faces == 20);
    CHECK(self.volume == doctest::Approx(oracle::zonotope_volume(oracle::w_generators())).epsilon(1e-9));
    CHECK(self.solid());
    const auto apart = convex_intersection({0, 0, 5}, P, geo().tol);
    CHECK_FALSE(apart.solid());
    CHECK(convex_intersection({10, 0, 0}, P, geo().tol).volume == 0.0);
    oracle::Rng rng(77);
    for (int i = 0; i < 50; ++i) {
        const Label m = rng.label(-1, 1);
        const Vec3 t = project_3d(m, geo().basis);
        const auto a = convex_intersection(t, P, geo().tol);
        const auto b = convex_intersection(-1.0 * t, P, geo().tol);
        CHECK(std::abs(a.volume - b.volume) < 1e-9);
        CHECK(a.solid() == b.solid());
        if (a.solid()) CHECK(a.faces == b.faces);
        CHECK(a.volume <= self.volume + 1e-9);
    }
}

TEST_CASE("overlap labels and ratios") {
    CHECK(overlap_label({4, 0, 4}) == OverlapLabel::A1);
    CHECK(overlap_label({5, 1, 4}) == OverlapLabel::A23);
    CHECK(overlap_label({4, 1, 3}) == OverlapLabel::A46);
    CHECK(overlap_label({5, 2, 3}) == OverlapLabel::A57);
    CHECK(overlap_label({6, 2, 4}) == OverlapLabel::A8);
    CHECK_THROWS_AS(overlap_label({3, 0, 3}), CensusViolation);
    CHECK_THROWS_AS(overlap_label({4, 2, 2}), CensusViolation);
    const auto r = analytic_overlap_ratios();
    double s = 0.0;
    for (double x : r) s += x;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    const double p = oracle::kPhi;
    CHECK(r[1] / r[0] == doctest::Approx(std::pow(p, -3)));
    CHECK(r[2] / r[0] == doctest::Approx(std::pow(p, -2)));
    CHECK(r[3] / r[0] == doctest::Approx(std::pow(p, -3)));
    CHECK(r[4] / r[0] == doctest::Approx((std::pow(p, -2) + std::pow(p, -4)) / 2));
    CHECK(std::string(to_string(OverlapLabel::A46)) == "A46");
}

TEST_CASE("neighbor stencil is symmetric") {
    const auto& st = neighbor_stencil(geo());
    const std::set<Label> all(st.begin(), st.end());
    CHECK(st.size() == 82);
    for (const auto& m : st) {
        CHECK(all.count(Label{} - m) == 1);
        CHECK_FALSE(m == Label{});
    }
    CHECK(census_margin(geo()) == 3);
}

TEST_CASE("overlap census: classes, face counts, thread independence") {
    const auto sp = space(78, 8);
    const TipIndex tips(sp.tips);
    const auto a = overlap_census(sp.L, tips, geo(), 1);
    const auto b = overlap_census(sp.L, tips, geo(), 4);
    CHECK(a.total > 500);
    CHECK(a.counts == b.counts);
    CHECK(a.face_histogram == b.face_histogram);
    CHECK(a.shared_atoms == b.shared_atoms);
    std::size_t sum = 0;
    for (auto n : a.counts) sum += n;
    CHECK(sum == a.total);
    for (const auto& [faces, n] : a.face_histogram) CHECK((faces == 6 || faces == 12));
    const auto f = a.frequencies();
    const auto r = analytic_overlap_ratios();
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(f[i] - r[i]) < 0.05);
}

TEST_CASE("overlap class is invariant under the diagonal shift") {
    const auto sp = space(79, 9);
    const TipIndex tips(sp.tips);
    OverlapClassifier cls(geo());
    const int margin = census_margin(geo());
    std::size_t checked = 0;
    for (const auto& t : sp.tips) {
        const Label u = t + Label::diagonal();
        if (!LabelBox{9}.contains(t, margin) || !LabelBox{9}.contains(u, margin)) continue;
        const auto x = cls.classify(t, tips), y = cls.classify(u, tips);
        CHECK(x.label == y.label);
        CHECK(x.partners == y.partners);
        ++checked;
    }
    CHECK(checked > 100);
}

}
