#include "qc/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "qc/errors.hpp"

namespace qc {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 5> kModeNames{"tiling2d", "freq", "windows", "lattice3d", "overlap-census"};

// Twelve significant digits, the precision of every report column.
std::string g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fixed6(double v) {
    char buf[64];
    // Avoid "-0.000000" so mirrored coordinates print identically.
    if (std::abs(v) < 5e-7) v = 0.0;
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

json vec(Vec2 v) { return json::array({v.x, v.y}); }
json vec(Vec3 v) { return json::array({v.x, v.y, v.z}); }

json polygon_json(const ConvexPolygon& poly) {
    json out = json::array();
    for (const auto& v : poly.vertices()) out.push_back(vec(v));
    return out;
}

std::string label_id(const Label& k) {
    std::string s;
    for (std::size_t j = 0; j < 5; ++j) {
        if (j) s += '_';
        s += std::to_string(k.k[j]);
    }
    return s;
}

}  // namespace

const char* to_string(Mode mode) { return kModeNames[static_cast<std::size_t>(mode)]; }

Mode parse_mode(const std::string& name) {
    for (std::size_t i = 0; i < kModeNames.size(); ++i)
        if (name == kModeNames[i]) return static_cast<Mode>(i);
    throw ConfigError("unknown mode '" + name + "'");
}

void validate(const RunConfig& cfg) {
    if (!(cfg.c >= 0.0 && cfg.c < 1.0)) throw ConfigError("c must lie in [0, 1), got " + g12(cfg.c));
    if (cfg.gamma)
        for (double g : *cfg.gamma)
            if (!std::isfinite(g)) throw ConfigError("gamma components must be finite");
    if (cfg.radius < 1) throw ConfigError("radius must be at least 1, got " + std::to_string(cfg.radius));
    if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) throw ConfigError("tolerance must be positive, got " + g12(cfg.tol));
    if (cfg.threads < 1) throw ConfigError("threads must be at least 1, got " + std::to_string(cfg.threads));
    if (cfg.index && (*cfg.index < 1 || *cfg.index > 5))
        throw ConfigError("index must lie in 1..5, got " + std::to_string(*cfg.index));
    if (cfg.cells < 0) throw ConfigError("cells must be non-negative");
    static const std::map<Mode, std::vector<std::string>> formats{
        {Mode::Tiling2d, {"svg", "json"}},  {Mode::Freq, {"csv", "json"}}, {Mode::Windows, {"json"}},
        {Mode::Lattice3d, {"obj"}},         {Mode::OverlapCensus, {"csv", "json"}},
    };
    const auto& ok = formats.at(cfg.mode);
    if (!cfg.format.empty() && std::find(ok.begin(), ok.end(), cfg.format) == ok.end())
        throw ConfigError("format '" + cfg.format + "' is not available for mode " + to_string(cfg.mode));
}

json to_json(const RunConfig& cfg) {
    json j;
    j["mode"] = to_string(cfg.mode);
    j["c"] = cfg.c;
    j["gamma"] = cfg.gamma ? json(*cfg.gamma) : json("auto");
    j["seed"] = cfg.seed;
    j["radius"] = cfg.radius;
    j["tol"] = cfg.tol;
    j["threads"] = cfg.threads;
    j["index"] = cfg.index ? json(*cfg.index) : json(nullptr);
    j["cells"] = cfg.cells;
    j["out"] = cfg.out;
    j["format"] = cfg.format;
    return j;
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("run configuration must be a JSON object");
    RunConfig cfg;
    try {
        for (const auto& [key, _] : j.items()) {
            static const std::vector<std::string> known{"mode", "c",     "gamma", "seed", "radius", "tol",
                                                        "threads", "index", "cells", "out", "format"};
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw ConfigError("unknown run configuration field '" + key + "'");
        }
        if (j.contains("mode")) cfg.mode = parse_mode(j.at("mode").get<std::string>());
        if (j.contains("c")) cfg.c = j.at("c").get<double>();
        if (j.contains("gamma")) {
            const auto& g = j.at("gamma");
            if (g.is_string()) {
                if (g.get<std::string>() != "auto") throw ConfigError("gamma must be 'auto' or 5 numbers");
            } else {
                if (!g.is_array() || g.size() != 5) throw ConfigError("gamma must be 'auto' or 5 numbers");
                cfg.gamma = g.get<std::array<double, 5>>();
            }
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("radius")) cfg.radius = j.at("radius").get<int>();
        if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
        if (j.contains("index") && !j.at("index").is_null()) cfg.index = j.at("index").get<int>();
        if (j.contains("cells")) cfg.cells = j.at("cells").get<int>();
        if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
        if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad run configuration: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

std::string dump_run_config(const RunConfig& cfg) { return to_json(cfg).dump(2); }

RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run configuration is not valid JSON: ") + e.what());
    }
    return run_config_from_json(j);
}

GridShift draw_shift(std::uint64_t seed, double c, int attempt) {
    if (attempt < 0) throw DomainError("draw attempt must be non-negative");
    std::mt19937_64 rng(seed);
    // Take the top 53 bits ourselves: std::uniform_real_distribution is not
    // specified bit-for-bit across standard libraries.
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::array<double, 5> g{};
    for (int a = 0; a <= attempt; ++a)
        for (double& v : g) v = uniform();
    return shift_with_sum(g, c);
}

GridShift resolve_shift(const RunConfig& cfg, int attempt) {
    if (!cfg.gamma) return draw_shift(cfg.seed, cfg.c, attempt);
    auto shift = normalize_shift(*cfg.gamma);
    // A logged shift sums to its c only up to rounding; keep the logged c so
    // that replaying a resolved configuration rebuilds the same windows.
    const double d = std::abs(shift.c - cfg.c);
    if (std::min(d, 1.0 - d) <= 1e-12) shift.c = cfg.c;
    return shift;
}

RunConfig resolved(const RunConfig& cfg, const GridShift& shift) {
    RunConfig r = cfg;
    r.gamma = shift.gamma;
    r.c = shift.c;
    return r;
}

void TilingDocument::check() const {
    for (const auto& e : edges)
        for (const Label* end : {&e.from, &e.to}) {
            const auto it = std::lower_bound(vertices.begin(), vertices.end(), *end,
                                             [](const TilingVertex& v, const Label& k) { return v.label < k; });
            if (it == vertices.end() || it->label != *end)
                throw ConsistencyError("edge endpoint " + end->to_string() + " is not a vertex of the document");
        }
}

TilingDocument build_tiling_document(const LabelBox& box, const GridShift& shift, const WindowSet& windows,
                                     const WindowGeometry& geo, int threads) {
    const auto labels = accepted_labels_2d(box, shift, windows, geo, threads);
    const auto types = classify_vertices(labels, shift, windows, geo, threads);
    TilingDocument doc;
    doc.vertices.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        doc.vertices.push_back({labels[i], labels[i].index(), project_2d(labels[i], geo.basis), types[i]});
    for (const auto& k : labels)
        for (int m = 0; m < 5; ++m) {
            const Label nb = k + Label::unit(m);
            if (!std::binary_search(labels.begin(), labels.end(), nb)) continue;
            doc.edges.push_back({k, nb, m, EdgeSign::Positive, edge_style(k.index(), nb.index())});
        }
    std::sort(doc.edges.begin(), doc.edges.end(),
              [](const TilingEdge& a, const TilingEdge& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
    return doc;
}

std::string render_svg(const TilingDocument& doc, const SvgStyle& style) {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    if (!doc.vertices.empty()) {
        xmin = ymin = INFINITY;
        xmax = ymax = -INFINITY;
        for (const auto& v : doc.vertices) {
            xmin = std::min(xmin, v.xy.x);
            xmax = std::max(xmax, v.xy.x);
            ymin = std::min(ymin, v.xy.y);
            ymax = std::max(ymax, v.xy.y);
        }
    }
    const double s = style.scale, m = style.margin;
    // Screen coordinates: x' = s x, y' = -s y, so the picture is not mirrored.
    const double vx = s * xmin - m, vy = -s * ymax - m;
    const double vw = s * (xmax - xmin) + 2 * m, vh = s * (ymax - ymin) + 2 * m;

    std::map<Label, Vec2> pos;
    for (const auto& v : doc.vertices) pos.emplace(v.label, v.xy);

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<!-- Rhombus tiling. Plane coordinates (x, y) are drawn at (" << g12(s) << "x, -" << g12(s)
       << "y): the y axis is flipped so the picture has the usual mathematical orientation.\n"
       << "     Edge classes by endpoint indices: e12 thin dashed, e23 thick solid, e34 thin solid, e45 thick dashed. -->\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << fixed6(vx) << ' ' << fixed6(vy) << ' '
       << fixed6(vw) << ' ' << fixed6(vh) << "\" width=\"" << fixed6(vw) << "\" height=\"" << fixed6(vh) << "\">\n"
       << "<style>\n"
       << "path { fill: none; stroke: black; stroke-linecap: round; }\n"
       << ".e12 { stroke-width: 1; stroke-dasharray: 4 3; }\n"
       << ".e23 { stroke-width: 3; }\n"
       << ".e34 { stroke-width: 1; }\n"
       << ".e45 { stroke-width: 3; stroke-dasharray: 4 3; }\n"
       << "</style>\n";
    if (doc.edges.empty()) {
        os << "<g id=\"edges\"/>\n";
    } else {
        os << "<g id=\"edges\">\n";
        for (const auto& e : doc.edges) {
            const Vec2 a = pos.at(e.from), b = pos.at(e.to);
            os << "<path class=\"" << to_string(e.style) << "\" d=\"M " << fixed6(s * a.x) << ' ' << fixed6(-s * a.y)
               << " L " << fixed6(s * b.x) << ' ' << fixed6(-s * b.y) << "\"/>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string frequency_csv(const FrequencyReport& report) {
    std::ostringstream os;
    os << "I,n_pos,n_neg,analytic,empirical,count,abs_err\n";
    for (const auto& r : report.rows)
        os << r.type.index << ',' << r.type.n_pos << ',' << r.type.n_neg << ',' << g12(r.analytic) << ','
           << g12(r.empirical) << ',' << r.count << ',' << g12(std::abs(r.analytic - r.empirical)) << '\n';
    os << "# c=" << g12(report.c) << " total=" << report.total << '\n';
    os << "# analytic_sum=" << g12(report.analytic_sum()) << '\n';
    return os.str();
}

json frequency_json(const FrequencyReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"I", r.type.index},
                        {"n_pos", r.type.n_pos},
                        {"n_neg", r.type.n_neg},
                        {"analytic", r.analytic},
                        {"empirical", r.empirical},
                        {"count", r.count},
                        {"abs_err", std::abs(r.analytic - r.empirical)}});
    return {{"c", report.c}, {"total", report.total}, {"analytic_sum", report.analytic_sum()}, {"rows", rows}};
}

std::string overlap_csv(const OverlapCensus& census) {
    const auto freq = census.frequencies();
    const auto ratio = analytic_overlap_ratios();
    std::ostringstream os;
    os << "class,neighbors,K,J,count,frequency,analytic_ratio\n";
    for (std::size_t i = 0; i < 5; ++i) {
        const auto& sig = kOverlapSignatures[i];
        os << to_string(static_cast<OverlapLabel>(i)) << ',' << sig.neighbors << ',' << sig.K << ',' << sig.J << ','
           << census.counts[i] << ',' << g12(freq[i]) << ',' << g12(ratio[i]) << '\n';
    }
    os << "# total=" << census.total << '\n';
    os << "# shared_polyhedron_faces";
    for (const auto& [f, n] : census.face_histogram) os << ' ' << f << ':' << n;
    os << '\n';
    for (std::size_t i = 0; i < 5; ++i) {
        os << "# shared_atoms " << to_string(static_cast<OverlapLabel>(i));
        for (const auto& [a, n] : census.shared_atoms[i]) os << ' ' << a << ':' << n;
        os << '\n';
    }
    return os.str();
}

json overlap_json(const OverlapCensus& census) {
    const auto freq = census.frequencies();
    const auto ratio = analytic_overlap_ratios();
    json classes = json::array();
    for (std::size_t i = 0; i < 5; ++i) {
        const auto& sig = kOverlapSignatures[i];
        json shared = json::object();
        for (const auto& [a, n] : census.shared_atoms[i]) shared[std::to_string(a)] = n;
        classes.push_back({{"class", to_string(static_cast<OverlapLabel>(i))},
                           {"neighbors", sig.neighbors},
                           {"K", sig.K},
                           {"J", sig.J},
                           {"count", census.counts[i]},
                           {"frequency", freq[i]},
                           {"analytic_ratio", ratio[i]},
                           {"shared_atoms", shared}});
    }
    json faces = json::object();
    for (const auto& [f, n] : census.face_histogram) faces[std::to_string(f)] = n;
    return {{"total", census.total}, {"classes", classes}, {"shared_polyhedron_faces", faces}};
}

std::string cells_obj(const std::vector<CellInstance>& cells, const WindowGeometry& geo) {
    const auto& cube = cube_vertices();
    std::map<Label, std::size_t> ids;
    std::ostringstream os;
    os << "# lattice cells: 22 hull atoms with the faces of the cell, 4 interior atoms as bare vertices\n";
    auto vertex = [&](const Label& k) {
        const auto [it, fresh] = ids.emplace(k, ids.size() + 1);
        if (fresh) {
            const Vec3 p = project_3d(k, geo.basis);
            os << "v " << fixed6(p.x) << ' ' << fixed6(p.y) << ' ' << fixed6(p.z) << '\n';
        }
        return it->second;
    };
    for (const auto& cell : cells) {
        os << "o cell_" << label_id(cell.tip) << '\n';
        std::vector<std::vector<std::size_t>> faces;
        for (const auto& f : geo.P.faces) {
            std::vector<std::size_t> loop;
            for (int id : f.vertices) loop.push_back(vertex(cell.tip + cube[static_cast<std::size_t>(id)]));
            faces.push_back(std::move(loop));
        }
        for (const auto& k : cell.interior_atoms) vertex(k);
        for (const auto& loop : faces) {
            os << 'f';
            for (auto v : loop) os << ' ' << v;
            os << '\n';
        }
    }
    return os.str();
}

json window_geometry_json(const WindowGeometry& geo, double c, std::optional<int> index) {
    json out;
    out["c"] = c;
    out["tolerance"] = geo.tol.eps;
    json P;
    json pv = json::array();
    for (int id : geo.P.vertices) pv.push_back({{"id", id}, {"point", vec(geo.P.points[static_cast<std::size_t>(id)])}});
    P["vertices"] = pv;
    json pe = json::array();
    for (const auto& [a, b] : geo.P.edges) pe.push_back({a, b});
    P["edges"] = pe;
    json pf = json::array();
    for (const auto& f : geo.P.faces) pf.push_back(f.vertices);
    P["faces"] = pf;
    P["interior_points"] = geo.P.interior_points;
    out["polytope"] = P;

    json Q;
    Q["hull"] = polygon_json(geo.Q.hull);
    Q["hull_ids"] = geo.Q.vertex_ids;
    Q["inner"] = polygon_json(geo.Q.inner);
    Q["inner_ids"] = geo.Q.inner_ids;
    out["decagon"] = Q;

    json slices = json::array();
    auto add = [&](const SliceWindow& w) {
        slices.push_back({{"index", w.index}, {"height", w.height}, {"vertices", polygon_json(w.polygon)}});
    };
    if (index) {
        add(slice_window(geo.P, *index, c, geo.tol));
    } else {
        const WindowSet ws(geo, c);
        for (int I = 1; I <= 5; ++I)
            if (const auto* w = ws.window(I)) add(*w);
    }
    out["slices"] = slices;
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to standard output");
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    f << text;
    f.close();
    if (!f) throw IoError("cannot write '" + path + "': " + std::strerror(errno));
}

}  // namespace qc
