#include "qc/tiling2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "qc/errors.hpp"
#include "qc/kernels.hpp"
#include "qc/parallel.hpp"

namespace qc {

EdgeStyle edge_style(int index_a, int index_b) {
    const int lo = std::min(index_a, index_b), hi = std::max(index_a, index_b);
    if (hi - lo != 1 || lo < 1 || hi > 5)
        throw DomainError("no edge style for indices " + std::to_string(index_a) + " and " + std::to_string(index_b));
    switch (lo) {
        case 1: return EdgeStyle::ThinDashed;
        case 2: return EdgeStyle::ThickSolid;
        case 3: return EdgeStyle::ThinSolid;
        default: return EdgeStyle::ThickDashed;
    }
}

const char* to_string(EdgeStyle style) {
    switch (style) {
        case EdgeStyle::ThinDashed: return "e12";
        case EdgeStyle::ThickSolid: return "e23";
        case EdgeStyle::ThinSolid: return "e34";
        case EdgeStyle::ThickDashed: return "e45";
    }
    return "?";
}

std::string VertexType::to_string() const {
    std::ostringstream os;
    os << '[' << n_pos << ',' << n_neg << "]_" << index;
    return os.str();
}

std::vector<DirectedEdge> edges_at(const Label& k, const GridShift& shift, const WindowSet& windows,
                                   const WindowGeometry& geo) {
    const auto self = accept_2d(k, shift, windows, geo);
    if (self.decision != Decision::Accept)
        throw DomainError("edges_at: label " + k.to_string() + " is not an accepted vertex (" + to_string(self.decision) + ")");
    std::vector<DirectedEdge> edges;
    for (int sgn : {+1, -1}) {
        for (int m = 0; m < 5; ++m) {
            const Label step = Label::unit(m);
            const Label nb = sgn > 0 ? k + step : k - step;
            const auto a = accept_2d(nb, shift, windows, geo);
            if (a.decision == Decision::Singular)
                throw SingularError("neighbour " + nb.to_string() + " of " + k.to_string() + " is on a window boundary");
            if (a.decision != Decision::Accept) continue;
            DirectedEdge e;
            e.from = k;
            e.to = nb;
            e.family = m;
            e.direction = static_cast<double>(sgn) * geo.basis.d[static_cast<std::size_t>(m)];
            e.sign = sgn > 0 ? EdgeSign::Positive : EdgeSign::Negative;
            e.style = edge_style(self.index, a.index);
            edges.push_back(e);
        }
    }
    return edges;
}

VertexType classify_vertex(const Label& k, const GridShift& shift, const WindowSet& windows, const WindowGeometry& geo) {
    VertexType t{k.index(), 0, 0};
    for (const auto& e : edges_at(k, shift, windows, geo)) (e.sign == EdgeSign::Positive ? t.n_pos : t.n_neg) += 1;
    return t;
}

std::vector<VertexType> classify_vertices(std::span<const Label> vertices, const GridShift& shift,
                                          const WindowSet& windows, const WindowGeometry& geo, int threads) {
    std::array<double, 5> ax{}, ay{};
    for (int j = 0; j < 5; ++j) {
        const Vec2 a = geo.basis.d2(j);
        ax[static_cast<std::size_t>(j)] = a.x;
        ay[static_cast<std::size_t>(j)] = a.y;
    }
    std::vector<VertexType> types(vertices.size());
    parallel_chunks(0, static_cast<long>(vertices.size()), threads, [&](long lo, long hi, int) {
        constexpr std::size_t kBatch = 2048;
        kernels::LabelColumns cols;
        std::vector<double> x, y;
        std::vector<Decision> dec;
        std::vector<std::size_t> rows;
        std::vector<Label> self_labels;
        for (long start = lo; start < hi; start += static_cast<long>(kBatch)) {
            const long stop = std::min<long>(hi, start + static_cast<long>(kBatch));
            for (long i = start; i < stop; ++i) {
                const auto& k = vertices[static_cast<std::size_t>(i)];
                types[static_cast<std::size_t>(i)] = {k.index(), 0, 0};
            }
            // One pass per neighbour direction and per target index.
            for (int sgn : {+1, -1}) {
                for (int m = 0; m < 5; ++m) {
                    for (int I = 1; I <= 5; ++I) {
                        const auto* edges = windows.edge_table(I + sgn);
                        if (!edges) continue;
                        cols.clear();
                        rows.clear();
                        for (long i = start; i < stop; ++i) {
                            const auto& k = vertices[static_cast<std::size_t>(i)];
                            if (k.index() != I) continue;
                            cols.push_back(sgn > 0 ? k + Label::unit(m) : k - Label::unit(m));
                            rows.push_back(static_cast<std::size_t>(i));
                        }
                        if (rows.empty()) continue;
                        x.resize(rows.size());
                        y.resize(rows.size());
                        kernels::project_labels(cols, shift.values(), ax, ay, x, y);
                        decide_batch(*edges, x, y, geo.tol.eps, dec);
                        for (std::size_t r = 0; r < rows.size(); ++r) {
                            if (dec[r] == Decision::Singular)
                                throw SingularError("neighbour " + cols.row(r).to_string() + " of " +
                                                    vertices[rows[r]].to_string() + " is on a window boundary");
                            if (dec[r] == Decision::Accept) (sgn > 0 ? types[rows[r]].n_pos : types[rows[r]].n_neg) += 1;
                        }
                    }
                }
            }
        }
    });
    return types;
}

namespace {

using G = GoldenConstants;

double step(double x) { return x >= 0.0 ? 1.0 : 0.0; }
double sq(double x) { return x * x; }

constexpr double p = G::p;
constexpr double half_sqrt5 = 0.5 * (G::p_inv + G::p);  // (1/2)(p^-1 + p)

double a1(int n, double c) {
    const double u = sq(1.0 - c);
    switch (n) {
        case 5: return half_sqrt5 * G::p_inv4 * u;
        case 4: return 2.5 * G::p_inv4 * u;
        case 3: return 2.5 * G::p_inv3 * u;
        default: return 0.0;
    }
}

double a2(int n, int n_neg, double c) {
    const double q = G::p_inv2;
    // Complementary so that the breakpoint c = q is counted once.
    const double below = step(q - c), above = 1.0 - below;
    switch (n * 10 + n_neg) {
        case 50: return half_sqrt5 * (below * sq(G::p_inv3 + c) + above * G::p_inv4 * sq(2.0 - c));
        case 51: return below * 2.5 * (G::p_inv4 * G::p_inv + c) * p * (q - c);
        case 52: return below * 2.5 * G::p_inv * sq(q - c);
        case 40: return above * 2.5 * (c - q) * (G::p_inv * (1.0 - c) + G::p_inv3 * (2.0 - c));
        case 41: return below * 2.5 * G::p_inv * c * c + above * 2.5 * G::p_inv3 * sq(1.0 - c);
        case 32: return below * 2.5 * p * p * sq(q - c);
        case 31: return 5.0 * q * sq(1.0 - c) - below * 5.0 * p * p * sq(q - c);
        case 30: return 2.5 * c * c - above * 5.0 * sq(c - q);
        case 21: return 2.5 * G::p_inv * sq(1.0 - c);
        default: return 0.0;
    }
}

// The twelve I = 3 functions with n <= n'; the others follow by c -> 1 - c.
double a3_listed(int n, int n_neg, double c) {
    const double p2 = p * p, p3 = p2 * p;
    const double i1 = G::p_inv, i2 = G::p_inv2, i3 = G::p_inv3, i4 = G::p_inv4;
    switch (n * 10 + n_neg) {
        case 5: return step(i3 - c) * half_sqrt5 * sq(i3 - c);
        case 15: return step(i3 - c) * 2.5 * sq(i3 - c);
        case 25: return step(i2 - c) * 2.5 * p2 * sq(i2 - c) - step(i3 - c) * 5.0 * p2 * sq(i3 - c);
        case 35:
            return step(2.0 * i3 - c) *
                   (2.5 * c * c - step(c - i3) * 5.0 * p2 * sq(c - i3) + step(c - i2) * 5.0 * p3 * sq(c - i2));
        case 45:
            return step(c - i3) * (step(i2 + i4 - c) * 2.5 * p3 * sq(i2 + i4 - c) -
                                   step(2.0 * i3 - c) * 5.0 * p3 * sq(2.0 * i3 - c) +
                                   step(i2 - c) * 5.0 * p2 * sq(i2 - c));
        case 55:
            return step(c - i3) * (step(2.0 * i2 - c) * half_sqrt5 * sq(2.0 * i2 - c) -
                                   step(i2 + i4 - c) * 2.5 * p3 * sq(i2 + i4 - c) +
                                   step(2.0 * i3 - c) * 2.5 * p3 * sq(2.0 * i3 - c));
        case 34:
            return step(i1 - c) *
                   (2.5 * i3 * c * c - step(c - i2) * 5.0 * p * sq(c - i2) + step(c - 2.0 * i3) * 2.5 * p3 * sq(c - 2.0 * i3));
        case 44:
            return step(i1 - c) * (step(c - i2) * 5.0 * sq(c - i2) - step(c - 2.0 * i3) * 5.0 * p3 * sq(c - 2.0 * i3) +
                                   step(c - i2 - i4) * 5.0 * p3 * sq(c - i2 - i4));
        case 33: return 5.0 * i4 * sq(1.0 - c) - step(i1 - c) * 5.0 * i1 * sq(i1 - c) + step(i2 - c) * 5.0 * i1 * sq(i2 - c);
        case 23: return 5.0 * i3 * sq(1.0 - c) - step(i2 - c) * 2.5 * i1 * sq(i2 - c);
        case 22: return 10.0 * i1 * c * (1.0 - c);
        case 12: return 2.5 * i1 * sq(1.0 - c);
        default: return 0.0;
    }
}

double a3(int n, int n_neg, double c) {
    if (n <= n_neg) return a3_listed(n, n_neg, c);
    return a3_listed(n_neg, n, 1.0 - c);
}

}  // namespace

double analytic_A(int index, int n_pos, int n_neg, double c) {
    if (index < 1 || index > 5) throw DomainError("vertex index must be in 1..5, got " + std::to_string(index));
    if (n_pos < 0 || n_pos > 5 || n_neg < 0 || n_neg > 5) throw DomainError("edge counts must be in 0..5");
    if (!(c >= 0.0 && c < 1.0)) throw DomainError("c must lie in [0, 1), got " + std::to_string(c));
    if (!in_census({index, n_pos, n_neg})) return 0.0;
    switch (index) {
        case 1: return a1(n_pos, c);
        case 2: return a2(n_pos, n_neg, c);
        case 3: return a3(n_pos, n_neg, c);
        case 4: return a2(n_neg, n_pos, 1.0 - c);
        default: return a1(n_neg, 1.0 - c);
    }
}

double analytic_probability(const VertexType& t, double c) {
    return analytic_A(t.index, t.n_pos, t.n_neg, c) / (5.0 * GoldenConstants::p);
}

const std::vector<VertexType>& census_types() {
    static const std::vector<VertexType> types = [] {
        std::vector<VertexType> v;
        for (int n : {3, 4, 5}) v.push_back({1, n, 0});
        const std::array<std::array<int, 2>, 9> i2{{{5, 0}, {5, 1}, {5, 2}, {4, 0}, {4, 1}, {3, 2}, {3, 1}, {3, 0}, {2, 1}}};
        for (auto [a, b] : i2) v.push_back({2, a, b});
        const std::array<std::array<int, 2>, 12> i3{
            {{0, 5}, {1, 5}, {2, 5}, {3, 5}, {4, 5}, {5, 5}, {3, 4}, {4, 4}, {3, 3}, {2, 3}, {2, 2}, {1, 2}}};
        for (auto [a, b] : i3) {
            v.push_back({3, a, b});
            if (a != b) v.push_back({3, b, a});
        }
        for (auto [a, b] : i2) v.push_back({4, b, a});
        for (int n : {3, 4, 5}) v.push_back({5, 0, n});
        std::sort(v.begin(), v.end());
        return v;
    }();
    return types;
}

bool in_census(const VertexType& t) {
    const auto& v = census_types();
    return std::binary_search(v.begin(), v.end(), t);
}

std::vector<VertexType> analytic_support(int index, double c) {
    std::vector<VertexType> out;
    for (const auto& t : census_types())
        if (t.index == index && analytic_A(t.index, t.n_pos, t.n_neg, c) > kSupportFloor) out.push_back(t);
    return out;
}

double FrequencyReport::analytic_sum() const {
    double s = 0.0;
    for (const auto& r : rows) s += r.analytic;
    return s;
}

const FrequencyRow* FrequencyReport::find(const VertexType& t) const {
    for (const auto& r : rows)
        if (r.type == t) return &r;
    return nullptr;
}

FrequencyReport empirical_frequencies(const LabelBox& box, const GridShift& shift, const WindowSet& windows,
                                      const WindowGeometry& geo, int threads) {
    auto accepted = accepted_labels_2d(box, shift, windows, geo, threads);
    std::erase_if(accepted, [&](const Label& k) { return !box.contains(k, kBoundaryMargin); });
    const auto types = classify_vertices(accepted, shift, windows, geo, threads);

    std::map<VertexType, std::size_t> counts;
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (!in_census(types[i]))
            throw CensusViolation("vertex " + accepted[i].to_string() + " has type " + types[i].to_string() +
                                  ", which is outside the known census");
        ++counts[types[i]];
    }
    FrequencyReport rep;
    rep.c = shift.c;
    rep.total = accepted.size();
    for (const auto& t : census_types()) {
        const double a = analytic_probability(t, shift.c);
        const auto it = counts.find(t);
        const std::size_t n = it == counts.end() ? 0 : it->second;
        if (a <= kSupportFloor && n == 0) continue;
        rep.rows.push_back({t, a, rep.total ? static_cast<double>(n) / static_cast<double>(rep.total) : 0.0, n});
    }
    return rep;
}

}  // namespace qc
