// qc: generate tilings, frequency reports, windows and 3D cell censuses.
//
// Exit status: 0 success, 2 configuration error, 3 singular configuration,
// 1 anything else.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "qc/errors.hpp"
#include "qc/io.hpp"
#include "qc/lattice3d.hpp"
#include "qc/tiling2d.hpp"
#include "qc/window.hpp"

namespace {

using namespace qc;

constexpr int kExitConfig = 2;
constexpr int kExitSingular = 3;

std::string shift_text(const GridShift& s) {
    std::ostringstream os;
    os.precision(17);
    os << "gamma = (" << s.gamma[0];
    for (std::size_t j = 1; j < 5; ++j) os << ", " << s.gamma[j];
    os << "), c = " << s.c;
    return os.str();
}

std::string default_format(Mode mode) {
    switch (mode) {
        case Mode::Tiling2d: return "svg";
        case Mode::Freq: return "csv";
        case Mode::Windows: return "json";
        case Mode::Lattice3d: return "obj";
        case Mode::OverlapCensus: return "csv";
    }
    return "";
}

std::string produce(const RunConfig& cfg, const GridShift& shift) {
    const auto geo = make_window_geometry(Tolerance(cfg.tol));
    const LabelBox box{cfg.radius};
    const std::string format = cfg.format.empty() ? default_format(cfg.mode) : cfg.format;
    switch (cfg.mode) {
        case Mode::Windows:
            return window_geometry_json(geo, shift.c, cfg.index).dump(2) + "\n";
        case Mode::Tiling2d: {
            const WindowSet ws(geo, shift.c);
            const auto doc = build_tiling_document(box, shift, ws, geo, cfg.threads);
            if (format == "svg") return render_svg(doc);
            nlohmann::json v = nlohmann::json::array(), e = nlohmann::json::array();
            for (const auto& x : doc.vertices)
                v.push_back({{"label", x.label.k}, {"index", x.index}, {"xy", {x.xy.x, x.xy.y}}, {"type", x.type.to_string()}});
            for (const auto& x : doc.edges)
                e.push_back({{"from", x.from.k}, {"to", x.to.k}, {"family", x.family}, {"style", to_string(x.style)}});
            return nlohmann::json{{"vertices", v}, {"edges", e}}.dump(2) + "\n";
        }
        case Mode::Freq: {
            const WindowSet ws(geo, shift.c);
            const auto report = empirical_frequencies(box, shift, ws, geo, cfg.threads);
            std::cerr << "counted " << report.total << " vertices\n";
            return format == "csv" ? frequency_csv(report) : frequency_json(report).dump(2) + "\n";
        }
        case Mode::Lattice3d: {
            const auto L = build_lattice3(box, shift, geo, cfg.threads);
            const auto tips = find_tips(L, shift, geo);
            const int reach = cell_stencil(geo).reach;
            std::vector<CellInstance> cells;
            for (const auto& t : tips) {
                if (!box.contains(t, reach)) continue;
                if (cfg.cells > 0 && cells.size() >= static_cast<std::size_t>(cfg.cells)) break;
                cells.push_back(cell_at(t, L, shift, geo));
            }
            std::cerr << L.size() << " lattice points, " << tips.size() << " tips, " << cells.size()
                      << " cells written\n";
            return cells_obj(cells, geo);
        }
        case Mode::OverlapCensus: {
            const auto L = build_lattice3(box, shift, geo, cfg.threads);
            const TipIndex tips(find_tips(L, shift, geo));
            const auto census = overlap_census(L, tips, geo, cfg.threads);
            std::cerr << "classified " << census.total << " tips\n";
            return format == "csv" ? overlap_csv(census) : overlap_json(census).dump(2) + "\n";
        }
    }
    throw Error("unhandled mode");
}

// Overrides fields of base with the options actually given on the command line.
struct Flags {
    double c = 0.5;
    std::string gamma = "auto";
    std::uint64_t seed = 0;
    int radius = 20;
    double tol = 1e-9;
    int threads = 1;
    int index = 0;
    int cells = 0;
    std::string out;
    std::string format;
    std::string config;
};

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--c", f.c, "sum of the grid offsets, in [0, 1)")->capture_default_str();
    sub->add_option("--gamma", f.gamma, "five comma-separated offsets, or 'auto' to draw them from --seed")
        ->capture_default_str();
    sub->add_option("--seed", f.seed, "seed for automatic offsets")->capture_default_str();
    sub->add_option("--radius", f.radius, "half-width of the label box")->capture_default_str();
    sub->add_option("--tol", f.tol, "geometric tolerance")->capture_default_str();
    sub->add_option("--threads", f.threads, "worker threads")->capture_default_str();
    sub->add_option("--out", f.out, "output file (default: standard output)");
    sub->add_option("--format", f.format, "output format");
    sub->add_option("--config", f.config, "JSON run configuration; explicit flags take precedence");
}

std::array<double, 5> parse_gamma(const std::string& text) {
    std::array<double, 5> g{};
    std::stringstream ss(text);
    std::string item;
    std::size_t n = 0;
    while (std::getline(ss, item, ',')) {
        if (n == 5) throw ConfigError("--gamma takes exactly five values");
        try {
            std::size_t used = 0;
            g[n] = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--gamma: '" + item + "' is not a number");
        }
        ++n;
    }
    if (n != 5) throw ConfigError("--gamma takes exactly five values or 'auto'");
    return g;
}

RunConfig assemble(Mode mode, const CLI::App& sub, const Flags& f) {
    RunConfig cfg;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw ConfigError("cannot read configuration '" + f.config + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        cfg = parse_run_config(buf.str());
    }
    cfg.mode = mode;
    auto given = [&](const char* name) { return sub.count(name) > 0; };
    if (given("--c")) cfg.c = f.c;
    if (given("--gamma")) {
        if (f.gamma == "auto") cfg.gamma.reset();
        else cfg.gamma = parse_gamma(f.gamma);
    }
    if (given("--seed")) cfg.seed = f.seed;
    if (given("--radius")) cfg.radius = f.radius;
    if (given("--tol")) cfg.tol = f.tol;
    if (given("--threads")) cfg.threads = f.threads;
    if (sub.get_option_no_throw("--index") && given("--index")) cfg.index = f.index;
    if (sub.get_option_no_throw("--cells") && given("--cells")) cfg.cells = f.cells;
    if (given("--out")) cfg.out = f.out;
    if (given("--format")) cfg.format = f.format;
    validate(cfg);
    return cfg;
}

int run(int argc, char** argv) {
    CLI::App app{"Generalized Penrose tilings and quasiperiodic cell lattices from the 5D cubic lattice"};
    app.require_subcommand(1);
    Flags f;
    const std::array<std::pair<Mode, const char*>, 5> modes{{
        {Mode::Tiling2d, "rhombus tiling patch (svg | json)"},
        {Mode::Freq, "empirical vs analytic vertex-type frequencies (csv | json)"},
        {Mode::Windows, "window polytope, decagon and slices (json)"},
        {Mode::Lattice3d, "cells of the space lattice (obj)"},
        {Mode::OverlapCensus, "overlap classes of neighbouring cells (csv | json)"},
    }};
    std::vector<std::pair<Mode, CLI::App*>> subs;
    for (const auto& [mode, help] : modes) {
        auto* sub = app.add_subcommand(to_string(mode), help);
        add_flags(sub, f);
        if (mode == Mode::Windows) sub->add_option("--index", f.index, "export only slice I (1..5)");
        if (mode == Mode::Lattice3d) sub->add_option("--cells", f.cells, "number of cells to export, 0 for all");
        subs.emplace_back(mode, sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    RunConfig cfg;
    GridShift shift;
    try {
        for (const auto& [mode, sub] : subs)
            if (sub->parsed()) cfg = assemble(mode, *sub, f);
        if (cfg.gamma) {
            const auto s = normalize_shift(*cfg.gamma);
            const double d = std::abs(s.c - cfg.c);
            if (std::min(d, 1.0 - d) > 1e-12)
                std::cerr << "note: explicit gamma sums to c = " << s.c << ", which overrides c = " << cfg.c << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "qc: configuration error: " << e.what() << "\n";
        return kExitConfig;
    }

    for (int attempt = 0;; ++attempt) {
        try {
            shift = resolve_shift(cfg, attempt);
            const std::string text = produce(cfg, shift);
            std::cerr << dump_run_config(resolved(cfg, shift)) << "\n";
            write_text(cfg.out, text);
            return 0;
        } catch (const DegenerateWindowError& e) {
            std::cerr << dump_run_config(resolved(cfg, shift)) << "\n";
            std::cerr << "qc: degenerate window: " << e.what() << " (" << shift_text(shift) << ")\n";
            return kExitSingular;
        } catch (const SingularError& e) {
            if (!cfg.gamma && attempt + 1 < kMaxShiftDraws) {
                std::cerr << "qc: draw " << attempt << " is singular (" << e.what() << "); drawing again\n";
                continue;
            }
            std::cerr << dump_run_config(resolved(cfg, shift)) << "\n";
            std::cerr << "qc: singular configuration: " << e.what() << " (" << shift_text(shift) << ")\n";
            return kExitSingular;
        } catch (const ConfigError& e) {
            std::cerr << "qc: configuration error: " << e.what() << "\n";
            return kExitConfig;
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "qc: " << e.what() << "\n";
        return 1;
    }
}
