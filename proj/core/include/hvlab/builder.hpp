// Perturbative construction of periodic hollow-vortex domains from a balanced
// periodic configuration: the rational velocity profile f, the limit 1-form
// omega0, boundary tracing on |t f| = 1, residue and period diagnostics, the
// built domain (boundary images, stream function, circulations, velocity
// limits) and the closure-defect and flux/velocity-limit consistency checks.
#pragma once

#include "hvlab/configurations.hpp"
#include "hvlab/correspondence.hpp"
#include "hvlab/io.hpp"
#include "hvlab/numeric.hpp"

#include <optional>
#include <vector>

namespace hvlab::bld {

using num::cplx;

struct PoleEvaluation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ComponentsMerged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// f(z) = c0 + sum a_i z/(z - p_i); defaults a_i = c_i. The coefficient sum
// rule (sum a = 0 in case a, sum a = -2 c0 in case b) is enforced.
struct BuilderInput {
    cfg::PeriodicConfiguration config;
    double t;
    std::vector<cplx> a;

    BuilderInput(cfg::PeriodicConfiguration cfg_, double t_,
                 std::optional<std::vector<cplx>> a_ = std::nullopt);
};

cplx f_eval(const BuilderInput& input, cplx z);

// omega0/dz = c0/z + sum c_i/(z - p_i); depends on the configuration only.
cplx omega0_eval(const cfg::PeriodicConfiguration& config, cplx z);

// Largest t for which the n components of {|t f| = 1} trace as disjoint
// radial graphs around the p_i (bisection); builds reject t > 0.8 * t_max.
double t_max(const cfg::PeriodicConfiguration& config,
             std::optional<std::vector<cplx>> a = std::nullopt);

// Closed polyline on {|t f| = 1} around p_i, clockwise (boundary orientation
// of the flow domain {|t f| < 1}), at n_angles radial solves.
std::vector<cplx> trace_boundary(const BuilderInput& input, int i, int n_angles = 512);

// (Res_0, Res_inf) of g_t * t * omega0 with g_t = -i/(t f); expected
// (-i/t, +i/t) when a_i = c_i.
std::pair<cplx, cplx> residues_g_omega(const BuilderInput& input);

// Contour integral of f * omega0 counterclockwise around p_i; equals
// 2 pi i F_i with F_i the periodic force of the configuration.
cplx period_integral(const BuilderInput& input, int i);

// i t^2 conj( clockwise ∮_{gamma_i} f omega0 ) = -2 pi t^2 conj(F_i):
// the residual of the construction's period problem per component.
cplx closure_defect(const BuilderInput& input, int i);

struct BuiltDomain {
    double t = 0.0;
    double t_limit = 0.0;  // measured t_max of the configuration
    std::vector<std::vector<cplx>> z_curves;  // traced |tf| = 1 components
    std::vector<std::vector<cplx>> w_curves;  // their images under phi
    std::vector<double> circulations;         // i * ∮ t omega0 per component
    std::vector<cplx> defects;                // closure defects per component
    std::vector<double> u_values;             // mean boundary u per component
    std::vector<io::VelocitySample> velocity; // t conj(f) at boundary images
    cplx v_plus, v_minus;                     // velocity limits as y -> +-inf
    double periodicity_residual = 0.0;  // | homotopy phi-period - 2 pi |

    // Log-polar stream-function grid (theta-major), clipped to |t f| < 1;
    // invalid nodes are outside the flow domain or inside a guard radius.
    int grid_ntheta = 0, grid_nr = 0;
    std::vector<cplx> grid_w;          // image points i log z
    std::vector<double> grid_u;        // stream function
    std::vector<unsigned char> grid_valid;
};

// Assembles the domain at parameter t: traced boundaries and their images
// phi(z) (phi = i log z when a_i = c_i; numeric integration of -g_t t omega0
// otherwise), the stream function on a log-polar grid clipped to |t f| < 1,
// circulations, velocity limits, defects, and the 2 pi periodicity check.
BuiltDomain build_domain(const BuilderInput& input, int grid = 256);

struct AbReport {
    double flux_residual = 0.0;      // | sum C - T (conj v+ - conj v-) |
    double velocity_residual = 0.0;  // | T ((conj v+)^2 - (conj v-)^2) |
    char classification = '?';       // 'a' or 'b'
    double class_residual = 0.0;     // residual of the classified case's relations
};

// Checks the flux and velocity-limit identities over one period T and
// classifies the domain: (a) v+ = v- with sum C = 0, or (b) v+ = -v- real
// with v+ = sum C / (2T). Throws Unclassifiable beyond tolerance.
struct Unclassifiable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
AbReport prop_ab_check(const BuiltDomain& built, double T = 2.0 * 3.14159265358979323846,
                       double tol = 1e-6);

// Converts a built domain to the exportable artifact (streamlines from the
// u samples, report block with all diagnostics).
io::DomainArtifact to_artifact(const BuiltDomain& built, int streamline_levels = 15);

// Stream-function view of a built domain in the w-plane for the standard
// a_i = c_i build: u_w(w) = -(i t / 2) f(e^{-i w}), boundary = the traced
// phi-images, horizontally 2 pi periodic. The probing window extends `pad`
// beyond the boundary curves vertically; the base point sits above all
// vortices.
cor::StreamData stream_view(const BuiltDomain& built, const BuilderInput& input,
                            double pad = 1.0);

}  // namespace hvlab::bld
