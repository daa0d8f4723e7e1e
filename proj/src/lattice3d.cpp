#include "qc/lattice3d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iterator>
#include <mutex>
#include <sstream>

#include "qc/errors.hpp"
#include "qc/kernels.hpp"
#include "qc/parallel.hpp"

namespace qc {

Lattice3::Lattice3(LabelBox box, std::vector<Label> sorted_labels, const ProjectionBasis& basis)
    : box_(box), labels_(std::move(sorted_labels)) {
    points_.reserve(labels_.size());
    index_.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        points_.push_back(project_3d(labels_[i], basis));
        index_.emplace(labels_[i], i);
    }
}

std::optional<Vec3> Lattice3::point(const Label& k) const {
    const auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return points_[it->second];
}

Lattice3 build_lattice3(const LabelBox& box, const GridShift& shift, const WindowGeometry& geo, int threads) {
    return Lattice3(box, accepted_labels_3d(box, shift, geo, threads), geo.basis);
}

std::vector<Label> find_tips(const Lattice3& L, const GridShift& shift, const WindowGeometry& geo) {
    std::array<double, 5> ax{}, ay{};
    for (std::size_t j = 0; j < 5; ++j) {
        ax[j] = geo.basis.d[j].x;
        ay[j] = geo.basis.d[j].y;
    }
    kernels::LabelColumns cols;
    cols.reserve(L.size());
    for (const auto& k : L.labels()) cols.push_back(k);
    std::vector<double> x(L.size()), y(L.size());
    kernels::project_labels(cols, shift.values(), ax, ay, x, y);
    std::vector<Decision> dec;
    decide_batch(geo.inner_edges, x, y, geo.tol.eps, dec);
    std::vector<Label> tips;
    for (std::size_t i = 0; i < L.size(); ++i) {
        if (dec[i] == Decision::Singular)
            throw SingularError("test point of lattice point " + L.labels()[i].to_string() +
                                " lies on the boundary of the inner decagon; perturb gamma");
        if (dec[i] == Decision::Accept) tips.push_back(L.labels()[i]);
    }
    return tips;
}

namespace {

template <class Fn>
void for_each_offset(int lo, int hi, Fn&& fn) {
    Label m;
    for (m.k[0] = lo; m.k[0] <= hi; ++m.k[0])
        for (m.k[1] = lo; m.k[1] <= hi; ++m.k[1])
            for (m.k[2] = lo; m.k[2] <= hi; ++m.k[2])
                for (m.k[3] = lo; m.k[3] <= hi; ++m.k[3])
                    for (m.k[4] = lo; m.k[4] <= hi; ++m.k[4]) fn(static_cast<const Label&>(m));
}

int reach_of(const std::vector<Label>& offsets) {
    int r = 0;
    for (const auto& m : offsets)
        for (int v : m.k) r = std::max(r, std::abs(v));
    return r;
}

}  // namespace

const CellStencil& cell_stencil(const WindowGeometry& geo) {
    // The stencil depends only on the basis and tolerance, which are fixed for
    // a given WindowGeometry; cache per distinct eps.
    static std::mutex mu;
    static std::map<double, CellStencil> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(geo.tol.eps);
    if (it != cache.end()) return it->second;

    CellStencil s;
    const auto& cube = cube_vertices();
    for (int id : geo.P.vertices) s.hull_vertices.push_back(cube[static_cast<std::size_t>(id)]);
    std::sort(s.hull_vertices.begin(), s.hull_vertices.end());
    // Both the tip and the atom test points lie in Q, and the tip's in the inner
    // decagon, so |D^T m| <= p + 1/p.
    const double dmax = GoldenConstants::p + GoldenConstants::p_inv + 1e-9;
    for_each_offset(-2, 3, [&](const Label& m) {
        if (norm(project_2d(m, geo.basis)) > dmax) return;
        const auto loc = geo.P.locate(project_3d(m, geo.basis), geo.tol.eps);
        if (loc == Location::Inside) s.interior.push_back(m);
        else if (loc == Location::Boundary) s.boundary.push_back(m);
    });
    s.reach = std::max(reach_of(s.interior), reach_of(s.boundary));
    return cache.emplace(geo.tol.eps, std::move(s)).first->second;
}

std::vector<Label> interior_atoms(const Label& tip, const Lattice3& L, const WindowGeometry& geo) {
    const auto& st = cell_stencil(geo);
    if (!L.box().contains(tip, st.reach))
        throw ConsistencyError("lattice region does not cover the cell of tip " + tip.to_string());
    std::vector<Label> atoms;
    for (const auto& m : st.interior)
        if (L.contains(tip + m)) atoms.push_back(tip + m);
    if (atoms.size() != 4)
        throw ConsistencyError("cell of tip " + tip.to_string() + " has " + std::to_string(atoms.size()) +
                               " interior atoms; expected 4");
    return atoms;
}

CellInstance cell_at(const Label& tip, const Lattice3& L, const GridShift& shift, const WindowGeometry& geo) {
    const auto& st = cell_stencil(geo);
    CellInstance cell;
    cell.tip = tip;
    cell.tip_point = project_3d(tip, geo.basis);
    cell.interior_atoms = interior_atoms(tip, L, geo);
    for (const auto& m : st.hull_vertices) {
        if (!L.contains(tip + m))
            throw ConsistencyError("hull vertex " + (tip + m).to_string() + " of the cell of tip " + tip.to_string() +
                                   " is not in the lattice");
        cell.hull_atoms.push_back(tip + m);
    }
    for (const auto& m : st.boundary) {
        if (std::binary_search(st.hull_vertices.begin(), st.hull_vertices.end(), m)) continue;
        if (L.contains(tip + m))
            throw ConsistencyError("lattice point " + (tip + m).to_string() + " lies on the hull of the cell of tip " +
                                   tip.to_string() + " without being a vertex");
    }
    cell.triangle = geo.Q.triangle_of(window_point_3d(tip, shift.values(), geo.basis), geo.tol.eps);
    return cell;
}

const char* to_string(OverlapLabel label) {
    switch (label) {
        case OverlapLabel::A1: return "A1";
        case OverlapLabel::A23: return "A23";
        case OverlapLabel::A46: return "A46";
        case OverlapLabel::A57: return "A57";
        case OverlapLabel::A8: return "A8";
    }
    return "?";
}

OverlapLabel overlap_label(const OverlapSignature& sig) {
    for (std::size_t i = 0; i < kOverlapSignatures.size(); ++i)
        if (kOverlapSignatures[i] == sig) return static_cast<OverlapLabel>(i);
    std::ostringstream os;
    os << "overlap signature (" << sig.neighbors << " neighbours, " << sig.K << " K, " << sig.J
       << " J) is not one of the five known classes";
    throw CensusViolation(os.str());
}

std::array<double, 5> analytic_overlap_ratios() {
    using G = GoldenConstants;
    std::array<double, 5> r{1.0, G::p_inv3, G::p_inv2, G::p_inv3, 0.5 * (G::p_inv2 + G::p_inv4)};
    double s = 0.0;
    for (double v : r) s += v;
    for (double& v : r) v /= s;
    return r;
}

TipIndex::TipIndex(std::vector<Label> sorted_tips) : tips_(std::move(sorted_tips)) {
    set_.reserve(tips_.size());
    set_.insert(tips_.begin(), tips_.end());
}

const std::vector<Label>& neighbor_stencil(const WindowGeometry& geo) {
    static std::mutex mu;
    static std::map<double, std::vector<Label>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(geo.tol.eps);
    if (it != cache.end()) return it->second;

    std::vector<Label> offs;
    const double dmax = 2.0 * GoldenConstants::p_inv + 1e-9;
    for_each_offset(-3, 3, [&](const Label& m) {
        if (m == Label{}) return;
        const Vec3 w = project_3d(m, geo.basis);
        if (std::abs(w.z) > 4.0 || norm(w.xy()) >= 2.0 * GoldenConstants::p) return;
        if (norm(project_2d(m, geo.basis)) > dmax) return;
        offs.push_back(m);
    });
    return cache.emplace(geo.tol.eps, std::move(offs)).first->second;
}

int census_margin(const WindowGeometry& geo) {
    return reach_of(neighbor_stencil(geo)) + cell_stencil(geo).reach;
}

OverlapClassifier::OverlapClassifier(const WindowGeometry& geo) : geo_(geo) {}

const IntersectionSummary& OverlapClassifier::overlap(const Label& offset) {
    auto it = cache_.find(offset);
    if (it == cache_.end())
        it = cache_.emplace(offset, convex_intersection(project_3d(offset, geo_.basis), geo_.P, geo_.tol)).first;
    return it->second;
}

OverlapClass OverlapClassifier::classify(const Label& tip, const TipIndex& tips) {
    OverlapSignature sig;
    std::vector<Label> partners;
    for (const auto& m : neighbor_stencil(geo_)) {
        if (!tips.contains(tip + m)) continue;
        const auto& s = overlap(m);
        if (!s.solid()) continue;
        ++sig.neighbors;
        ++face_histogram_[s.faces];
        partners.push_back(m);
        if (s.faces == 6) ++sig.J;
        else if (s.faces == 12) ++sig.K;
        else
            throw CensusViolation("cells of tips " + tip.to_string() + " and " + (tip + m).to_string() + " share a " +
                                  std::to_string(s.faces) + "-face polyhedron; expected 6 or 12 faces");
    }
    return {overlap_label(sig), sig, std::move(partners)};
}

OverlapClass classify_overlap(const Label& tip, const TipIndex& tips, const WindowGeometry& geo) {
    OverlapClassifier c(geo);
    return c.classify(tip, tips);
}

std::vector<Label> cell_atoms(const Label& tip, const Lattice3& L, const WindowGeometry& geo) {
    auto atoms = interior_atoms(tip, L, geo);
    for (const auto& m : cell_stencil(geo).hull_vertices) atoms.push_back(tip + m);
    std::sort(atoms.begin(), atoms.end());
    return atoms;
}

std::array<double, 5> OverlapCensus::frequencies() const {
    std::array<double, 5> f{};
    if (total == 0) return f;
    for (std::size_t i = 0; i < 5; ++i) f[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return f;
}

OverlapCensus overlap_census(const Lattice3& L, const TipIndex& tips, const WindowGeometry& geo, int threads) {
    const int margin = census_margin(geo);
    std::vector<Label> inner;
    for (const auto& t : tips.tips())
        if (L.box().contains(t, margin)) inner.push_back(t);

    const int nthreads = std::max(1, threads);
    std::vector<OverlapCensus> parts(static_cast<std::size_t>(nthreads));
    parallel_chunks(0, static_cast<long>(inner.size()), nthreads, [&](long lo, long hi, int chunk) {
        OverlapClassifier cls(geo);
        auto& part = parts[static_cast<std::size_t>(chunk)];
        for (long i = lo; i < hi; ++i) {
            const Label& tip = inner[static_cast<std::size_t>(i)];
            const auto oc = cls.classify(tip, tips);
            const auto cls_id = static_cast<std::size_t>(oc.label);
            ++part.counts[cls_id];
            const auto mine = cell_atoms(tip, L, geo);
            for (const auto& m : oc.partners) {
                const auto theirs = cell_atoms(tip + m, L, geo);
                std::vector<Label> common;
                std::set_intersection(mine.begin(), mine.end(), theirs.begin(), theirs.end(),
                                      std::back_inserter(common));
                ++part.shared_atoms[cls_id][common.size()];
            }
            ++part.total;
        }
        part.face_histogram = cls.face_histogram();
    });
    OverlapCensus out;
    for (const auto& p : parts) {
        for (std::size_t i = 0; i < 5; ++i) out.counts[i] += p.counts[i];
        out.total += p.total;
        for (const auto& [f, n] : p.face_histogram) out.face_histogram[f] += n;
        for (std::size_t i = 0; i < 5; ++i)
            for (const auto& [a, n] : p.shared_atoms[i]) out.shared_atoms[i][a] += n;
    }
    return out;
}

}  // namespace qc
