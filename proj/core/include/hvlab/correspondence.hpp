// The two directions of the vortex-domain / minimal-graph correspondence:
// the contracting map psi built from the stream function, the expanding map F
// built from the graph differential dF, inverse-map caches, the round trip,
// and circulation measurement.
#pragma once

#include "hvlab/numeric.hpp"

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace hvlab::cor {

using num::cplx;

struct NotSubunitGradient : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotExpanding : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonFiniteGradient : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonRealCirculation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutsideDomain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Planar domain: a probing window [x0, x0+width] x [ymin, ymax] minus the
// interiors of closed boundary polylines (horizontally periodic when
// period != 0; boundary translates at -period, 0, +period are excluded too).
struct Domain {
    std::vector<std::vector<cplx>> boundary;
    double period = 0.0;
    double x0 = 0.0, width = 0.0;
    double ymin = 0.0, ymax = 0.0;

    bool inside(cplx z) const;
    // Distance margin to every boundary polyline (translates included).
    double boundary_clearance(cplx z) const;
    // Whether the open segment (a, b) properly crosses a boundary polyline
    // (endpoints on the boundary do not count).
    bool segment_hits_boundary(cplx a, cplx b) const;
};

// Stream function side: u_z holomorphic on the domain, |2 u_z| < 1 inside
// and = 1 on the boundary.
struct StreamData {
    std::function<cplx(cplx)> uz;
    Domain domain;
    cplx z0;        // base point (interior)
    double u0 = 0;  // u(z0)
};

// Graph side: v with gradient, |grad v| finite inside, -> infinity at the
// boundary.
struct GraphData {
    std::function<double(cplx)> v;
    std::function<cplx(cplx)> grad;  // v_x + i v_y
    Domain domain;
};

struct MapSample {
    cplx source, image;
    cplx d_z, d_zbar;  // Wirtinger derivatives of the map at source
    double jacobian_det = 0.0;
};

// Weierstrass data of a vortex domain in functional form:
// g = -1/(2 u_z), omega/dz = 2 u_z.
struct FunctionalWeierstrass {
    std::function<cplx(cplx)> g;
    std::function<cplx(cplx)> omega;  // omega/dz
};

struct ProbeOptions {
    int grid = 192;          // forward-cache resolution per axis
    double tol = 1e-10;      // inverse-map Newton tolerance
    int probes = 200;
    unsigned seed = 12345;
};

// ---- psi: vortex -> graph ------------------------------------------------------

// psi(z) with psi(z0) = 0, integrating d(psi) = (dz - 4 conj(u_z)^2 dzbar)/2
// along the polyline (front() must be sd.z0).
MapSample psi_map(const StreamData& sd, const std::vector<cplx>& path);

class ForwardCache;  // grid + spanning-tree cache of psi and u (internal)

struct VortexToMinimal {
    GraphData graph;
    FunctionalWeierstrass data;
    std::vector<cplx> boundary_translations;  // psi(gamma_i) - gamma_i
    std::function<cplx(cplx)> psi;            // cached psi, psi(z0) = 0
    std::shared_ptr<ForwardCache> cache;
};

// Builds the graph v = u o psi^{-1} over psi(domain); throws
// NotSubunitGradient when an interior probe has |2 u_z| >= 1.
VortexToMinimal vortex_to_minimal(const StreamData& sd, const ProbeOptions& opt = {});

// ---- dF and F: graph -> vortex ----------------------------------------------------

struct DFCoefficients {
    cplx cx, cy;         // dF = cx dx + cy dy
    double closedness;   // | d(cx)/dy - d(cy)/dx | by central differences
};
DFCoefficients graph_dF(const GraphData& gd, cplx point, double fd_step = 1e-4);

// F along a polyline with F(path.front()) = path.front() (anchored so the
// round trip is the identity up to translation).
MapSample f_map(const GraphData& gd, const std::vector<cplx>& path);

struct MinimalToVortex {
    StreamData stream;
    std::function<cplx(cplx)> F;  // cached F, anchored at the probing anchor
    std::shared_ptr<ForwardCache> cache;
};

// Recovers the vortex domain F(graph domain) with u = v o F^{-1} and the
// stream derivative from the graph gradient. Throws NotExpanding when an
// interior probe has |g| <= 1.
MinimalToVortex minimal_to_vortex(const GraphData& gd, const ProbeOptions& opt = {});

// ---- round trip and circulation -----------------------------------------------------

struct RoundTrip {
    double max_deviation = 0.0;  // after removing the best-fit translation
    cplx translation;            // mean of (F o psi)(z) - z over probes
};
RoundTrip roundtrip_check(const StreamData& sd, const ProbeOptions& opt = {});

// C(gamma) = i * ∮ 2 u_z dz along the closed polyline; throws
// NonRealCirculation when |Im| > tol.
double circulation(const StreamData& sd, const std::vector<cplx>& gamma,
                   double tol = 1e-8);

// Velocity field (v_x, v_y) = -2i conj(u_z) as a complex number.
cplx velocity(const StreamData& sd, cplx z);

}  // namespace hvlab::cor
