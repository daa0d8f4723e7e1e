#include "qc/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "qc/errors.hpp"
#include "qc/parallel.hpp"

namespace qc {

GridShift normalize_shift(std::array<double, 5> gamma) {
    double sum = 0.0;
    for (double g : gamma) sum += g;
    if (!std::isfinite(sum)) throw DomainError("grid shift must be finite");
    double n = std::floor(sum);
    double c = sum - n;
    if (c >= 1.0) {
        n += 1.0;
        c = 0.0;
    }
    gamma[0] -= n;
    return {gamma, c};
}

GridShift shift_with_sum(std::array<double, 5> gamma, double c) {
    if (!(c >= 0.0 && c < 1.0)) throw DomainError("c must lie in [0, 1), got " + std::to_string(c));
    gamma[0] = c - (gamma[1] + gamma[2] + gamma[3] + gamma[4]);
    return {gamma, c};
}

const std::array<Label, 32>& cube_vertices() {
    static const std::array<Label, 32> table = {{
        {{0, 0, 0, 0, 0}}, {{1, 0, 0, 0, 0}}, {{0, 0, 0, 1, 0}}, {{0, 1, 0, 0, 0}},
        {{0, 0, 0, 0, 1}}, {{0, 0, 1, 0, 0}}, {{1, 0, 0, 1, 0}}, {{0, 1, 0, 1, 0}},
        {{0, 1, 0, 0, 1}}, {{0, 0, 1, 0, 1}}, {{1, 0, 1, 0, 0}}, {{1, 1, 0, 0, 0}},
        {{0, 0, 0, 1, 1}}, {{0, 1, 1, 0, 0}}, {{1, 0, 0, 0, 1}}, {{0, 0, 1, 1, 0}},
        {{1, 1, 0, 0, 1}}, {{0, 0, 1, 1, 1}}, {{1, 1, 1, 0, 0}}, {{1, 0, 0, 1, 1}},
        {{0, 1, 1, 1, 0}}, {{1, 1, 0, 1, 0}}, {{0, 1, 0, 1, 1}}, {{0, 1, 1, 0, 1}},
        {{1, 0, 1, 0, 1}}, {{1, 0, 1, 1, 0}}, {{1, 1, 0, 1, 1}}, {{0, 1, 1, 1, 1}},
        {{1, 1, 1, 0, 1}}, {{1, 0, 1, 1, 1}}, {{1, 1, 1, 1, 0}}, {{1, 1, 1, 1, 1}},
    }};
    return table;
}

double PolytopeP::max_face_distance(Vec3 pt) const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& f : faces) m = std::max(m, dot(f.normal, pt) - f.offset);
    return m;
}

Location PolytopeP::locate(Vec3 pt, double eps) const {
    const double m = max_face_distance(pt);
    if (m < -eps) return Location::Inside;
    if (m > eps) return Location::Outside;
    return Location::Boundary;
}

namespace {

int nearest_id(std::span<const Vec2> pts, const std::vector<int>& ids, Vec2 q) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int id : ids) {
        const double d = norm(pts[static_cast<std::size_t>(id)] - q);
        if (d < bd) {
            bd = d;
            best = id;
        }
    }
    return best;
}

}  // namespace

PolytopeP build_polytope_P(const ProjectionBasis& basis, const Tolerance& tol) {
    PolytopeP P;
    const auto& cube = cube_vertices();
    for (std::size_t i = 0; i < 32; ++i) P.points[i] = project_3d(cube[i], basis);
    const double eps = tol.eps;

    // Supporting planes through every non-degenerate triple.
    struct Plane {
        Vec3 n;
        double off;
    };
    std::vector<Plane> planes;
    for (std::size_t a = 0; a < 32; ++a)
        for (std::size_t b = a + 1; b < 32; ++b)
            for (std::size_t c = b + 1; c < 32; ++c) {
                Vec3 n = cross(P.points[b] - P.points[a], P.points[c] - P.points[a]);
                const double len = norm(n);
                if (len < 1e-6) continue;
                n = (1.0 / len) * n;
                double off = dot(n, P.points[a]);
                int above = 0, below = 0;
                for (const auto& q : P.points) {
                    const double s = dot(n, q) - off;
                    if (s > eps) ++above;
                    if (s < -eps) ++below;
                }
                if (above > 0 && below > 0) continue;
                if (above > 0) {
                    n = -n;
                    off = -off;
                }
                const bool seen = std::any_of(planes.begin(), planes.end(), [&](const Plane& p) {
                    return norm(p.n - n) < 1e-7 && std::abs(p.off - off) < 1e-7;
                });
                if (!seen) planes.push_back({n, off});
            }

    std::set<int> hull_ids;
    std::set<std::pair<int, int>> edges;
    for (const auto& pl : planes) {
        std::vector<int> on;
        for (int i = 0; i < 32; ++i)
            if (std::abs(dot(pl.n, P.points[static_cast<std::size_t>(i)]) - pl.off) <= eps) on.push_back(i);
        const Vec3 o = P.points[static_cast<std::size_t>(on[0])];
        Vec3 u = P.points[static_cast<std::size_t>(on[1])] - o;
        u = (1.0 / norm(u)) * u;
        const Vec3 v = cross(pl.n, u);
        std::array<Vec2, 32> flat{};
        std::vector<Vec2> pts;
        for (int id : on) {
            const Vec3 d = P.points[static_cast<std::size_t>(id)] - o;
            flat[static_cast<std::size_t>(id)] = {dot(d, u), dot(d, v)};
            pts.push_back(flat[static_cast<std::size_t>(id)]);
        }
        const auto hull = convex_hull_2d(pts, eps);
        PolyFace face;
        face.normal = pl.n;
        face.offset = pl.off;
        for (auto h : hull) face.vertices.push_back(nearest_id(flat, on, h));
        for (std::size_t i = 0; i < face.vertices.size(); ++i) {
            const int a = face.vertices[i];
            const int b = face.vertices[(i + 1) % face.vertices.size()];
            edges.insert({std::min(a, b), std::max(a, b)});
            hull_ids.insert(a);
        }
        P.faces.push_back(std::move(face));
    }
    P.vertices.assign(hull_ids.begin(), hull_ids.end());
    P.edges.assign(edges.begin(), edges.end());
    for (int i = 0; i < 32; ++i)
        if (!hull_ids.count(i)) P.interior_points.push_back(i);

    if (P.vertices.size() != 22 || P.edges.size() != 40 || P.faces.size() != 20) {
        std::ostringstream os;
        os << "polytope P hull has " << P.vertices.size() << " vertices, " << P.edges.size() << " edges, "
           << P.faces.size() << " faces; expected 22, 40, 20";
        throw ConsistencyError(os.str());
    }
    for (int id : P.interior_points)
        if (P.locate(P.points[static_cast<std::size_t>(id)], eps) != Location::Inside)
            throw ConsistencyError("projected cube vertex " + std::to_string(id) + " lies on the hull of P but is not a vertex");
    return P;
}

int DecagonQ::triangle_of(Vec2 pt, double eps) const {
    for (std::size_t i = 0; i < triangles.size(); ++i)
        if (triangles[i].locate(pt, eps) == Location::Inside) return static_cast<int>(i);
    return -1;
}

DecagonQ build_decagon_Q(const ProjectionBasis& basis, const Tolerance& tol) {
    DecagonQ Q;
    const auto& cube = cube_vertices();
    for (std::size_t i = 0; i < 32; ++i) Q.points[i] = project_2d(cube[i], basis);
    const double eps = tol.eps;

    std::vector<int> all(32);
    for (int i = 0; i < 32; ++i) all[static_cast<std::size_t>(i)] = i;
    const auto hull = convex_hull_2d(std::vector<Vec2>(Q.points.begin(), Q.points.end()), eps);
    if (hull.size() != 10)
        throw ConsistencyError("decagon Q hull has " + std::to_string(hull.size()) + " vertices; expected 10");
    for (auto h : hull) Q.vertex_ids.push_back(nearest_id(Q.points, all, h));
    Q.hull = ConvexPolygon(hull);
    for (int i = 0; i < 32; ++i)
        if (std::find(Q.vertex_ids.begin(), Q.vertex_ids.end(), i) == Q.vertex_ids.end()) Q.interior_points.push_back(i);

    const double r_inner = GoldenConstants::p_inv;
    for (int id : Q.interior_points)
        if (std::abs(norm(Q.points[static_cast<std::size_t>(id)]) - r_inner) <= 1e-9) Q.inner_ids.push_back(id);
    if (Q.inner_ids.size() != 10)
        throw ConsistencyError("expected 10 interior projections at radius 1/p, found " + std::to_string(Q.inner_ids.size()));
    std::sort(Q.inner_ids.begin(), Q.inner_ids.end(), [&](int a, int b) {
        const Vec2 pa = Q.points[static_cast<std::size_t>(a)], pb = Q.points[static_cast<std::size_t>(b)];
        return std::atan2(pa.y, pa.x) < std::atan2(pb.y, pb.x);
    });
    std::vector<Vec2> inner;
    for (int id : Q.inner_ids) inner.push_back(Q.points[static_cast<std::size_t>(id)]);
    Q.inner = ConvexPolygon(inner);
    for (std::size_t i = 0; i < inner.size(); ++i)
        Q.triangles.emplace_back(std::vector<Vec2>{{0.0, 0.0}, inner[i], inner[(i + 1) % inner.size()]});
    return Q;
}

SliceWindow slice_window(const PolytopeP& P, int index, double c, const Tolerance& tol) {
    if (!(c >= 0.0 && c < 1.0)) throw DomainError("c must lie in [0, 1), got " + std::to_string(c));
    const double eps = tol.eps;
    const double h = static_cast<double>(index) - c;
    std::ostringstream where;
    where << "window V_" << index << " at height " << h << " (c = " << c << ")";
    if (h < -eps || h > 5.0 + eps) throw EmptyWindowError(where.str() + " misses the polytope, which spans 0 <= z <= 5");
    if (std::abs(h) <= eps || std::abs(h - 5.0) <= eps)
        throw DegenerateWindowError(where.str() + " is degenerate: the plane only touches a tip of the polytope");

    std::vector<Vec2> pts;
    for (const auto& f : P.faces) {
        const std::size_t n = f.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 a = P.points[static_cast<std::size_t>(f.vertices[i])];
            const Vec3 b = P.points[static_cast<std::size_t>(f.vertices[(i + 1) % n])];
            const double da = a.z - h, db = b.z - h;
            if (std::abs(da) <= eps) pts.push_back(a.xy());
            if ((da > eps && db < -eps) || (da < -eps && db > eps)) {
                const double t = da / (da - db);
                pts.push_back(a.xy() + t * (b.xy() - a.xy()));
            }
        }
    }
    auto hull = convex_hull_2d(std::move(pts), eps);
    if (hull.size() < 3) throw DegenerateWindowError(where.str() + " has no interior");
    return {index, h, ConvexPolygon(std::move(hull))};
}

WindowGeometry make_window_geometry(const Tolerance& tol) {
    WindowGeometry g{make_basis(), tol, {}, {}, {}, {}};
    g.P = build_polytope_P(g.basis, tol);
    g.Q = build_decagon_Q(g.basis, tol);
    g.q_edges = kernels::EdgeTable::from(g.Q.hull);
    g.inner_edges = kernels::EdgeTable::from(g.Q.inner);
    return g;
}

WindowSet::WindowSet(const WindowGeometry& geo, double c) : c_(c) {
    if (!(c >= 0.0 && c < 1.0)) throw DomainError("c must lie in [0, 1), got " + std::to_string(c));
    for (int I = 1; I <= 5; ++I) {
        try {
            auto w = slice_window(geo.P, I, c, geo.tol);
            tables_[static_cast<std::size_t>(I)] = kernels::EdgeTable::from(w.polygon);
            windows_[static_cast<std::size_t>(I)] = std::move(w);
        } catch (const DegenerateWindowError&) {
        } catch (const EmptyWindowError&) {
        }
    }
}

const SliceWindow* WindowSet::window(int index) const {
    if (index < 1 || index > 5) return nullptr;
    const auto& w = windows_[static_cast<std::size_t>(index)];
    return w ? &*w : nullptr;
}

const kernels::EdgeTable* WindowSet::edge_table(int index) const {
    return window(index) ? &tables_[static_cast<std::size_t>(index)] : nullptr;
}

const char* to_string(Decision d) {
    switch (d) {
        case Decision::Accept: return "accept";
        case Decision::Reject: return "reject";
        case Decision::Singular: return "singular";
    }
    return "?";
}

namespace {

Decision decide(double max_dist, double eps) {
    if (max_dist < -eps) return Decision::Accept;
    if (max_dist > eps) return Decision::Reject;
    return Decision::Singular;
}

void check_same_c(const GridShift& shift, const WindowSet& windows) {
    if (std::abs(shift.c - windows.c()) > 1e-12) {
        std::ostringstream os;
        os << "grid shift has c = " << shift.c << " but windows were built for c = " << windows.c();
        throw ConfigError(os.str());
    }
}

std::string describe_singular(const Label& k, const GridShift& shift, const char* window) {
    std::ostringstream os;
    os.precision(17);
    os << "label " << k.to_string() << " lies within tolerance of the boundary of " << window << " for gamma = ("
       << shift.gamma[0] << ',' << shift.gamma[1] << ',' << shift.gamma[2] << ',' << shift.gamma[3] << ','
       << shift.gamma[4] << "); perturb gamma";
    return os.str();
}

}  // namespace

Acceptance2D accept_2d(const Label& k, const GridShift& shift, const WindowSet& windows, const WindowGeometry& geo) {
    check_same_c(shift, windows);
    Acceptance2D out;
    out.index = k.index();
    const SliceWindow* w = windows.window(out.index);
    if (!w) return out;
    const Vec2 t = window_point_2d(k, shift.values(), geo.basis);
    out.decision = decide(w->polygon.max_edge_distance(t), geo.tol.eps);
    if (out.decision == Decision::Accept) out.vertex = project_2d(k, geo.basis);
    return out;
}

Acceptance3D accept_3d(const Label& k, const GridShift& shift, const WindowGeometry& geo) {
    Acceptance3D out;
    const Vec2 t = window_point_3d(k, shift.values(), geo.basis);
    out.decision = decide(geo.Q.hull.max_edge_distance(t), geo.tol.eps);
    if (out.decision == Decision::Accept) out.vertex = project_3d(k, geo.basis);
    return out;
}

bool LabelBox::contains(const Label& k, int margin) const {
    const int lim = half_width - margin;
    return std::all_of(k.k.begin(), k.k.end(), [lim](int v) { return v >= -lim && v <= lim; });
}

void decide_batch(const kernels::EdgeTable& edges, std::span<const double> x, std::span<const double> y, double eps,
                  std::vector<Decision>& decisions) {
    std::vector<double> dist(x.size());
    kernels::max_edge_distance(edges, x, y, dist);
    decisions.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) decisions[i] = decide(dist[i], eps);
}

namespace {

// Enumerates, for every mesh of a Dim-family sub-grid inside the label box,
// the labels whose remaining coordinates are compatible with that mesh.
// Every label that satisfies the full mesh condition is produced exactly once.
template <int Dim>
class MeshCandidates {
public:
    MeshCandidates(const std::array<std::array<double, Dim>, 5>& normals, std::span<const double, 5> gamma, int R)
        : gamma_(gamma.begin(), gamma.end()), R_(R) {
        // Invert the Dim x Dim block of the first Dim families.
        std::array<std::array<double, Dim>, Dim> m{};
        for (int i = 0; i < Dim; ++i)
            for (int j = 0; j < Dim; ++j) m[i][j] = normals[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const auto inv = invert(m);
        // coef_[j][i]: change of family j's value per unit change of family i's value.
        for (int j = Dim; j < 5; ++j)
            for (int i = 0; i < Dim; ++i) {
                double s = 0.0;
                for (int a = 0; a < Dim; ++a)
                    s += normals[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)] * inv[a][i];
                coef_[j][i] = s;
            }
    }

    // Calls emit(label) for candidates whose first coordinate lies in [k0_lo, k0_hi).
    template <class Emit>
    void run(long k0_lo, long k0_hi, Emit&& emit) const {
        Label k;
        for (long k0 = k0_lo; k0 < k0_hi; ++k0) {
            k.k[0] = static_cast<int>(k0);
            recurse_fixed(1, k, emit);
        }
    }

private:
    template <class Emit>
    void recurse_fixed(int i, Label& k, Emit& emit) const {
        if (i == Dim) {
            std::array<int, 5> lo{}, hi{};
            for (int j = Dim; j < 5; ++j) {
                double vlo = gamma_[static_cast<std::size_t>(j)], vhi = vlo;
                for (int a = 0; a < Dim; ++a) {
                    const double ga = gamma_[static_cast<std::size_t>(a)];
                    const double p = coef_[j][a] * (k.k[static_cast<std::size_t>(a)] - 1 - ga);
                    const double q = coef_[j][a] * (k.k[static_cast<std::size_t>(a)] - ga);
                    vlo += std::min(p, q);
                    vhi += std::max(p, q);
                }
                lo[static_cast<std::size_t>(j)] = std::max(-R_, static_cast<int>(std::ceil(vlo)));
                hi[static_cast<std::size_t>(j)] = std::min(R_, static_cast<int>(std::ceil(vhi)));
            }
            recurse_free(Dim, k, lo, hi, emit);
            return;
        }
        for (int v = -R_; v <= R_; ++v) {
            k.k[static_cast<std::size_t>(i)] = v;
            recurse_fixed(i + 1, k, emit);
        }
    }

    template <class Emit>
    void recurse_free(int j, Label& k, const std::array<int, 5>& lo, const std::array<int, 5>& hi, Emit& emit) const {
        if (j == 5) {
            emit(static_cast<const Label&>(k));
            return;
        }
        for (int v = lo[static_cast<std::size_t>(j)]; v <= hi[static_cast<std::size_t>(j)]; ++v) {
            k.k[static_cast<std::size_t>(j)] = v;
            recurse_free(j + 1, k, lo, hi, emit);
        }
    }

    static std::array<std::array<double, Dim>, Dim> invert(std::array<std::array<double, Dim>, Dim> m) {
        std::array<std::array<double, Dim>, Dim> inv{};
        for (int i = 0; i < Dim; ++i) inv[i][i] = 1.0;
        for (int col = 0; col < Dim; ++col) {
            int piv = col;
            for (int r = col + 1; r < Dim; ++r)
                if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
            std::swap(m[col], m[piv]);
            std::swap(inv[col], inv[piv]);
            const double d = m[col][col];
            for (int c = 0; c < Dim; ++c) {
                m[col][c] /= d;
                inv[col][c] /= d;
            }
            for (int r = 0; r < Dim; ++r) {
                if (r == col) continue;
                const double f = m[r][col];
                for (int c = 0; c < Dim; ++c) {
                    m[r][c] -= f * m[col][c];
                    inv[r][c] -= f * inv[col][c];
                }
            }
        }
        return inv;
    }

    std::vector<double> gamma_;
    int R_;
    std::array<std::array<double, Dim>, 5> coef_{};
};

// Accumulates candidate labels and tests them against one window in batches.
class BatchTester {
public:
    BatchTester(const kernels::EdgeTable* edges, const GridShift& shift, const std::array<double, 5>& ax,
                const std::array<double, 5>& ay, double eps, const char* window_name, std::vector<Label>& out)
        : edges_(edges), shift_(shift), ax_(ax), ay_(ay), eps_(eps), name_(window_name), out_(out) {
        cols_.reserve(kBatch);
    }

    void push(const Label& k) {
        cols_.push_back(k);
        if (cols_.size() >= kBatch) flush();
    }

    void flush() {
        const std::size_t n = cols_.size();
        if (n == 0) return;
        x_.resize(n);
        y_.resize(n);
        kernels::project_labels(cols_, shift_.values(), ax_, ay_, x_, y_);
        decide_batch(*edges_, x_, y_, eps_, decisions_);
        for (std::size_t i = 0; i < n; ++i) {
            if (decisions_[i] == Decision::Accept) out_.push_back(cols_.row(i));
            else if (decisions_[i] == Decision::Singular)
                throw SingularError(describe_singular(cols_.row(i), shift_, name_));
        }
        cols_.clear();
    }

private:
    static constexpr std::size_t kBatch = 4096;
    const kernels::EdgeTable* edges_;
    const GridShift& shift_;
    const std::array<double, 5>& ax_;
    const std::array<double, 5>& ay_;
    double eps_;
    const char* name_;
    std::vector<Label>& out_;
    kernels::LabelColumns cols_;
    std::vector<double> x_, y_;
    std::vector<Decision> decisions_;
};

std::vector<Label> merge_sorted(std::vector<std::vector<Label>>& parts) {
    std::vector<Label> all;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    all.reserve(total);
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

std::vector<Label> accepted_labels_2d(const LabelBox& box, const GridShift& shift, const WindowSet& windows,
                                      const WindowGeometry& geo, int threads) {
    check_same_c(shift, windows);
    const int R = box.half_width;
    std::array<std::array<double, 2>, 5> normals{};
    std::array<double, 5> ax{}, ay{};
    for (std::size_t j = 0; j < 5; ++j) {
        normals[j] = {geo.basis.d[j].x, geo.basis.d[j].y};
        const Vec2 a = geo.basis.d2(static_cast<int>(j));
        ax[j] = a.x;
        ay[j] = a.y;
    }
    const MeshCandidates<2> gen(normals, shift.values(), R);
    static const char* names[6] = {"V_0", "V_1", "V_2", "V_3", "V_4", "V_5"};
    std::vector<std::vector<Label>> parts(static_cast<std::size_t>(std::max(1, threads)));
    parallel_chunks(-R, R + 1, threads, [&](long lo, long hi, int chunk) {
        auto& out = parts[static_cast<std::size_t>(chunk)];
        std::vector<BatchTester> testers;
        testers.reserve(6);
        std::array<BatchTester*, 6> by_index{};
        for (int I = 1; I <= 5; ++I) {
            if (const auto* t = windows.edge_table(I)) {
                testers.emplace_back(t, shift, ax, ay, geo.tol.eps, names[I], out);
                by_index[static_cast<std::size_t>(I)] = &testers.back();
            }
        }
        gen.run(lo, hi, [&](const Label& k) {
            const int I = k.index();
            if (I >= 1 && I <= 5 && by_index[static_cast<std::size_t>(I)]) by_index[static_cast<std::size_t>(I)]->push(k);
        });
        for (auto& t : testers) t.flush();
    });
    return merge_sorted(parts);
}

std::vector<Label> accepted_labels_3d(const LabelBox& box, const GridShift& shift, const WindowGeometry& geo,
                                      int threads) {
    const int R = box.half_width;
    std::array<std::array<double, 3>, 5> normals{};
    std::array<double, 5> ax{}, ay{};
    for (std::size_t j = 0; j < 5; ++j) {
        normals[j] = {geo.basis.w[j].x, geo.basis.w[j].y, geo.basis.w[j].z};
        ax[j] = geo.basis.d[j].x;
        ay[j] = geo.basis.d[j].y;
    }
    const MeshCandidates<3> gen(normals, shift.values(), R);
    std::vector<std::vector<Label>> parts(static_cast<std::size_t>(std::max(1, threads)));
    parallel_chunks(-R, R + 1, threads, [&](long lo, long hi, int chunk) {
        auto& out = parts[static_cast<std::size_t>(chunk)];
        BatchTester tester(&geo.q_edges, shift, ax, ay, geo.tol.eps, "the decagon Q", out);
        gen.run(lo, hi, [&](const Label& k) { tester.push(k); });
        tester.flush();
    });
    return merge_sorted(parts);
}

}  // namespace qc
