// Artifact types and exporters: domain artifacts (boundary polylines,
// streamlines, velocity samples, report), CSV/SVG/JSON serialization, the
// configuration file schema, and small shared utilities (self-intersection
// test, bounded parallel for).
#pragma once

#include "hvlab/configurations.hpp"
#include "hvlab/numeric.hpp"

#include <nlohmann/json_fwd.hpp>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace hvlab::io {

using num::cplx;
using json = nlohmann::json;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- artifact -----------------------------------------------------------------

struct BoundaryComponent {
    int id = 0;
    std::vector<cplx> polyline;  // closed: last point joins the first
    double circulation = 0.0;
    double u_value = 0.0;  // stream-function value on the component
};

struct Streamline {
    double level = 0.0;
    std::vector<cplx> polyline;  // open or closed
};

struct VelocitySample {
    cplx z;  // sample location (image plane)
    cplx v;  // complex velocity v_x + i v_y
};

// The (domain, stream function) output object: boundary curves, streamlines,
// velocity probes, translation periods for tiling, and a versioned report.
struct DomainArtifact {
    std::vector<BoundaryComponent> boundaries;
    std::vector<Streamline> streamlines;
    std::vector<VelocitySample> velocity;
    std::vector<cplx> periods;  // 1 (singly periodic) or 2 (doubly periodic)
    json report;                // always carries "schema": 1
};

// ---- CSV ------------------------------------------------------------------------
// Columns: component_id, kind (boundary|streamline), level, x, y.
// One row per vertex; 17 significant digits so that parse(emit(a)) reproduces
// every coordinate bit-exactly. Boundary rows carry the component's u value
// in the level column.

void write_csv(const DomainArtifact& a, std::ostream& os);
void write_csv_file(const DomainArtifact& a, const std::string& path);

// Rebuilds polylines, kinds and levels from CSV (circulations and the report
// are JSON-side data and are left defaulted).
DomainArtifact parse_csv(std::istream& is);
DomainArtifact parse_csv_file(const std::string& path);

// ---- SVG ------------------------------------------------------------------------
// y-axis flipped to mathematical orientation; viewport auto-fitted with a 5%
// margin; `tiles` horizontal periods drawn when the artifact has a period.
void write_svg(const DomainArtifact& a, std::ostream& os, int tiles = 3);
void write_svg_file(const DomainArtifact& a, const std::string& path, int tiles = 3);

// ---- JSON report ------------------------------------------------------------------

json artifact_report(const DomainArtifact& a);  // report + geometry summary
void write_json_file(const json& j, const std::string& path);

// ---- configuration files -----------------------------------------------------------

struct BuildSettings {
    double t = 0.05;
    int grid = 256;
    std::optional<std::vector<cplx>> a;  // builder coefficients, default c_i
};

struct SolverSettings {
    double tol = 1e-10;
    int probes = 200;
    unsigned seed = 12345;
};

struct ConfigFile {
    std::variant<cfg::FiniteConfiguration, cfg::PeriodicConfiguration> config;
    SolverSettings solver;
    BuildSettings build;

    bool is_periodic() const {
        return std::holds_alternative<cfg::PeriodicConfiguration>(config);
    }
};

// Throws SchemaError on missing/ill-typed keys or invariant violations.
ConfigFile load_config(const json& j);
ConfigFile load_config_file(const std::string& path);
json config_to_json(const ConfigFile& c);

// ---- utilities ------------------------------------------------------------------------

// True when any two non-adjacent segments of the polyline properly intersect.
bool polyline_self_intersects(const std::vector<cplx>& pts, bool closed);

// Runs fn(i) for i in [0, n); worker count capped by HVLAB_THREADS (>= 1).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Formats a double with 17 significant digits (round-trip exact).
std::string format_g17(double v);

}  // namespace hvlab::io
