#pragma once

// Run configuration and deterministic writers for tilings (SVG), cells (OBJ),
// frequency and overlap reports (CSV/JSON) and window geometry (JSON).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qc/geometry.hpp"
#include "qc/lattice3d.hpp"
#include "qc/tiling2d.hpp"
#include "qc/window.hpp"

namespace qc {

enum class Mode { Tiling2d, Freq, Windows, Lattice3d, OverlapCensus };

const char* to_string(Mode mode);
// Throws ConfigError for an unknown name.
Mode parse_mode(const std::string& name);

struct RunConfig {
    Mode mode = Mode::Tiling2d;
    double c = 0.5;
    std::optional<std::array<double, 5>> gamma;  // empty: drawn from seed
    std::uint64_t seed = 0;
    int radius = 20;  // label-box half-width
    double tol = 1e-9;
    int threads = 1;
    std::optional<int> index;  // windows mode: a single slice
    int cells = 0;             // lattice3d mode: cells exported to OBJ, 0 = all
    std::string out;           // empty: standard output
    std::string format;        // empty: the mode's default

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ConfigError for out-of-range values.
void validate(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);
// Throws ConfigError for missing or mistyped fields.
RunConfig run_config_from_json(const nlohmann::json& j);
std::string dump_run_config(const RunConfig& cfg);
RunConfig parse_run_config(const std::string& text);

// Number of draws tried for an automatic shift before giving up.
inline constexpr int kMaxShiftDraws = 16;

// Draw number `attempt` of the seeded stream: gamma_j uniform in [0, 1), then
// gamma_0 adjusted so that the offsets sum to c.
GridShift draw_shift(std::uint64_t seed, double c, int attempt);
// Explicit offsets when given (their sum fixes c), otherwise draw_shift.
GridShift resolve_shift(const RunConfig& cfg, int attempt = 0);
// cfg with gamma and c replaced by the shift actually used.
RunConfig resolved(const RunConfig& cfg, const GridShift& shift);

struct TilingVertex {
    Label label;
    int index = 0;
    Vec2 xy;
    VertexType type;
};

struct TilingEdge {
    Label from;  // to = from + e_family
    Label to;
    int family = 0;
    EdgeSign sign = EdgeSign::Positive;
    EdgeStyle style = EdgeStyle::ThinDashed;
};

struct TilingDocument {
    std::vector<TilingVertex> vertices;  // ascending by label
    std::vector<TilingEdge> edges;       // ascending by (from, to)

    // Throws ConsistencyError if an edge endpoint is missing.
    void check() const;
};

// Accepted vertices of the label box and the unit edges between them.
TilingDocument build_tiling_document(const LabelBox& box, const GridShift& shift, const WindowSet& windows,
                                     const WindowGeometry& geo, int threads = 1);

struct SvgStyle {
    double scale = 20.0;   // pixels per unit length
    double margin = 10.0;  // pixels
};

std::string render_svg(const TilingDocument& doc, const SvgStyle& style = {});

std::string frequency_csv(const FrequencyReport& report);
nlohmann::json frequency_json(const FrequencyReport& report);
std::string overlap_csv(const OverlapCensus& census);
nlohmann::json overlap_json(const OverlapCensus& census);

// One object per cell; vertices shared between cells are written once.
std::string cells_obj(const std::vector<CellInstance>& cells, const WindowGeometry& geo);

// P, Q, the inner decagon and the slice windows. With `index`, only that slice,
// which throws if it is empty or degenerate.
nlohmann::json window_geometry_json(const WindowGeometry& geo, double c, std::optional<int> index = std::nullopt);

// Writes text to path, or to standard output when path is empty or "-".
// Throws IoError naming the path.
void write_text(const std::string& path, const std::string& text);

}  // namespace qc
