#include "hvlab/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

namespace hvlab::cor {

namespace {

bool point_in_polygon(cplx z, const std::vector<cplx>& poly) {
    bool in = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const cplx a = poly[i], b = poly[j];
        if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
            const double xc =
                a.real() + (z.imag() - a.imag()) / (b.imag() - a.imag()) *
                               (b.real() - a.real());
            if (z.real() < xc) in = !in;
        }
    }
    return in;
}

double dist_to_segment(cplx z, cplx a, cplx b) {
    const cplx d = b - a;
    const double L2 = std::norm(d);
    if (L2 == 0.0) return std::abs(z - a);
    double s = ((z - a) * std::conj(d)).real() / L2;
    s = std::clamp(s, 0.0, 1.0);
    return std::abs(z - (a + s * d));
}

}  // namespace

bool Domain::inside(cplx z) const {
    if (z.real() < x0 || z.real() > x0 + width || z.imag() < ymin || z.imag() > ymax)
        return false;
    const int kmax = period != 0.0 ? 1 : 0;
    for (const auto& poly : boundary)
        for (int k = -kmax; k <= kmax; ++k)
            if (point_in_polygon(z - cplx(k * period, 0.0), poly)) return false;
    return true;
}

bool Domain::segment_hits_boundary(cplx a, cplx b) const {
    // Shrink slightly so querying a point exactly on the boundary is allowed.
    const cplx d = b - a;
    const cplx a1 = a + 1e-9 * d, b1 = b - 1e-9 * d;
    auto cross3 = [](cplx p, cplx q, cplx r) {
        return (q - p).real() * (r - p).imag() - (q - p).imag() * (r - p).real();
    };
    const int kmax = period != 0.0 ? 1 : 0;
    for (const auto& poly : boundary) {
        const std::size_t n = poly.size();
        for (int k = -kmax; k <= kmax; ++k) {
            const cplx s(k * period, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const cplx c = poly[i] + s, e = poly[(i + 1) % n] + s;
                if (cross3(a1, b1, c) * cross3(a1, b1, e) < 0 &&
                    cross3(c, e, a1) * cross3(c, e, b1) < 0)
                    return true;
            }
        }
    }
    return false;
}

double Domain::boundary_clearance(cplx z) const {
    double d = 1e300;
    const int kmax = period != 0.0 ? 1 : 0;
    for (const auto& poly : boundary) {
        const std::size_t n = poly.size();
        for (int k = -kmax; k <= kmax; ++k) {
            const cplx zs = z - cplx(k * period, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                d = std::min(d, dist_to_segment(zs, poly[i], poly[(i + 1) % n]));
        }
    }
    return d;
}

// ---- forward cache -----------------------------------------------------------------

// Grid over the domain window with a BFS spanning tree of in-domain edges;
// node values are accumulated edge integrals of the map and the scalar field.
class ForwardCache {
  public:
    using EdgeMap = std::function<cplx(cplx, cplx)>;      // map increment a -> b
    using EdgeVal = std::function<double(cplx, cplx)>;    // scalar increment
    using Deriv = std::function<std::pair<cplx, cplx>(cplx)>;  // (d_z, d_zbar)

    ForwardCache(Domain dom, cplx anchor, cplx anchor_w, double anchor_val, int grid,
                 EdgeMap emap, EdgeVal eval, Deriv deriv)
        : dom_(std::move(dom)), emap_(std::move(emap)), eval_(std::move(eval)),
          deriv_(std::move(deriv)), n_(grid) {
        hx_ = dom_.width / (n_ - 1);
        hy_ = (dom_.ymax - dom_.ymin) / (n_ - 1);
        nodes_.resize(std::size_t(n_) * n_);
        const double clear = 0.45 * std::min(hx_, hy_);
        for (int iy = 0; iy < n_; ++iy)
            for (int ix = 0; ix < n_; ++ix) {
                Node& nd = at(ix, iy);
                nd.z = cplx(dom_.x0 + ix * hx_, dom_.ymin + iy * hy_);
                nd.usable = dom_.inside(nd.z) && dom_.boundary_clearance(nd.z) > clear;
            }
        // BFS from the usable node nearest the anchor.
        int start = -1;
        double best = 1e300;
        for (int i = 0; i < n_ * n_; ++i)
            if (nodes_[i].usable && std::abs(nodes_[i].z - anchor) < best) {
                best = std::abs(nodes_[i].z - anchor);
                start = i;
            }
        if (start < 0) throw OutsideDomain("forward cache: no usable grid node");
        nodes_[start].w = anchor_w + emap_(anchor, nodes_[start].z);
        nodes_[start].val = anchor_val + eval_(anchor, nodes_[start].z);
        nodes_[start].reached = true;
        std::queue<int> q;
        q.push(start);
        while (!q.empty()) {
            const int i = q.front();
            q.pop();
            const int ix = i % n_, iy = i / n_;
            const int nb[4][2] = {{ix + 1, iy}, {ix - 1, iy}, {ix, iy + 1}, {ix, iy - 1}};
            for (auto [jx, jy] : nb) {
                if (jx < 0 || jx >= n_ || jy < 0 || jy >= n_) continue;
                Node& to = at(jx, jy);
                if (!to.usable || to.reached) continue;
                if (!segment_clear(nodes_[i].z, to.z)) continue;
                to.w = nodes_[i].w + emap_(nodes_[i].z, to.z);
                to.val = nodes_[i].val + eval_(nodes_[i].z, to.z);
                to.reached = true;
                q.push(jy * n_ + jx);
            }
        }
        build_seed_index();
    }

    const Domain& domain() const { return dom_; }

    // Map and scalar at an arbitrary interior point: cached node value plus a
    // straight final hop.
    std::pair<cplx, double> eval_at(cplx z) const {
        const Node* nd = hop_node(z);
        return {nd->w + emap_(nd->z, z), nd->val + eval_(nd->z, z)};
    }

    cplx map_at(cplx z) const { return eval_at(z).first; }
    double val_at(cplx z) const { return eval_at(z).second; }

    // Newton inversion of the cached map; seeds from the reached node whose
    // image is nearest w (bucket index over node images).
    cplx invert(cplx w, double tol) const {
        const Node* seed = seed_for(w);
        if (!seed) throw OutsideDomain("invert: empty cache");
        cplx z = seed->z;
        cplx r = map_at(z) - w;
        for (int it = 0; it < 80; ++it) {
            if (std::abs(r) <= tol) return z;
            const auto [a, b] = deriv_(z);
            const double det = std::norm(a) - std::norm(b);
            if (std::abs(det) < 1e-30)
                throw num::SingularJacobian("inverse map: degenerate derivative");
            const cplx step = (std::conj(a) * (-r) - b * std::conj(-r)) / det;
            // Damped update: stay inside the domain and require the residual
            // to shrink (the derivative degenerates toward the boundary).
            double lambda = 1.0;
            bool moved = false;
            for (int h = 0; h < 40; ++h, lambda *= 0.5) {
                const cplx zn = z + lambda * step;
                if (!dom_.inside(zn)) continue;
                const cplx rn = map_at(zn) - w;
                if (std::abs(rn) < std::abs(r)) {
                    z = zn;
                    r = rn;
                    moved = true;
                    break;
                }
            }
            if (!moved)
                throw num::NoConvergence("inverse map: Newton stalled at residual " +
                                         std::to_string(std::abs(r)));
        }
        throw num::NoConvergence("inverse map: Newton did not converge");
    }

  private:
    struct Node {
        cplx z, w;
        double val = 0.0;
        bool usable = false, reached = false;
    };

    Node& at(int ix, int iy) { return nodes_[std::size_t(iy) * n_ + ix]; }
    const Node& at(int ix, int iy) const { return nodes_[std::size_t(iy) * n_ + ix]; }

    bool segment_clear(cplx a, cplx b) const {
        return !dom_.segment_hits_boundary(a, b);
    }

    const Node* hop_node(cplx z) const {
        // Candidate nodes around z, nearest first, requiring a clear final hop.
        const int ix = int(std::round((z.real() - dom_.x0) / hx_));
        const int iy = int(std::round((z.imag() - dom_.ymin) / hy_));
        const Node* fallback = nullptr;
        double fb_best = 1e300;
        for (int ring = 0; ring < std::max(n_, 4); ++ring) {
            const Node* best = nullptr;
            double bd = 1e300;
            for (int dy = -ring; dy <= ring; ++dy)
                for (int dx = -ring; dx <= ring; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    const int jx = ix + dx, jy = iy + dy;
                    if (jx < 0 || jx >= n_ || jy < 0 || jy >= n_) continue;
                    const Node& nd = at(jx, jy);
                    if (!nd.reached) continue;
                    const double d = std::abs(nd.z - z);
                    if (d < fb_best) {
                        fb_best = d;
                        fallback = &nd;
                    }
                    if (d < bd && segment_clear_open(nd.z, z)) {
                        bd = d;
                        best = &nd;
                    }
                }
            if (best) return best;
            if (ring > 4 && fallback) break;
        }
        if (fallback) return fallback;
        throw OutsideDomain("forward cache query: no reachable node near point");
    }

    // The query endpoint itself may lie on the boundary.
    bool segment_clear_open(cplx a, cplx b) const {
        return !dom_.segment_hits_boundary(a, b);
    }

    void build_seed_index() {
        wx0_ = wy0_ = 1e300;
        double wx1 = -1e300, wy1 = -1e300;
        for (const Node& nd : nodes_)
            if (nd.reached) {
                wx0_ = std::min(wx0_, nd.w.real());
                wy0_ = std::min(wy0_, nd.w.imag());
                wx1 = std::max(wx1, nd.w.real());
                wy1 = std::max(wy1, nd.w.imag());
            }
        bwx_ = std::max(1e-300, (wx1 - wx0_) / n_);
        bwy_ = std::max(1e-300, (wy1 - wy0_) / n_);
        buckets_.assign(std::size_t(n_) * n_, {});
        for (const Node& nd : nodes_)
            if (nd.reached) {
                const int bx = std::clamp(int((nd.w.real() - wx0_) / bwx_), 0, n_ - 1);
                const int by = std::clamp(int((nd.w.imag() - wy0_) / bwy_), 0, n_ - 1);
                buckets_[std::size_t(by) * n_ + bx].push_back(&nd - nodes_.data());
            }
    }

    const Node* seed_for(cplx w) const {
        const int bx = std::clamp(int((w.real() - wx0_) / bwx_), 0, n_ - 1);
        const int by = std::clamp(int((w.imag() - wy0_) / bwy_), 0, n_ - 1);
        const Node* best = nullptr;
        double bd = 1e300;
        for (int ring = 0; ring < n_; ++ring) {
            for (int dy = -ring; dy <= ring; ++dy)
                for (int dx = -ring; dx <= ring; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    const int jx = bx + dx, jy = by + dy;
                    if (jx < 0 || jx >= n_ || jy < 0 || jy >= n_) continue;
                    for (int idx : buckets_[std::size_t(jy) * n_ + jx]) {
                        const double dist = std::abs(nodes_[idx].w - w);
                        if (dist < bd) {
                            bd = dist;
                            best = &nodes_[idx];
                        }
                    }
                }
            // One extra ring after a hit so a closer neighbor is not missed.
            if (best && ring > 0) break;
        }
        return best;
    }

    Domain dom_;
    EdgeMap emap_;
    EdgeVal eval_;
    Deriv deriv_;
    int n_;
    double hx_, hy_;
    std::vector<Node> nodes_;
    double wx0_ = 0, wy0_ = 0, bwx_ = 1, bwy_ = 1;
    std::vector<std::vector<int>> buckets_;
};

namespace {

// Conservative image window: maps samples along each edge of the source
// window and insets so the rectangle lies inside the image of the source
// window (the true image edges are curved; inverse queries must stay inside).
void image_window(const ForwardCache& cache, const Domain& d, Domain& img) {
    const int m = 9;
    double left = -1e300, right = 1e300, bottom = -1e300, top = 1e300;
    for (int k = 0; k <= m; ++k) {
        const double fx = d.x0 + d.width * k / double(m);
        const double fy = d.ymin + (d.ymax - d.ymin) * k / double(m);
        const cplx eps(1e-6 * d.width, 1e-6 * (d.ymax - d.ymin));
        const cplx pl(d.x0 + eps.real(), fy), pr(d.x0 + d.width - eps.real(), fy);
        const cplx pb(fx, d.ymin + eps.imag()), pt(fx, d.ymax - eps.imag());
        if (d.inside(pl)) left = std::max(left, cache.map_at(pl).real());
        if (d.inside(pr)) right = std::min(right, cache.map_at(pr).real());
        if (d.inside(pb)) bottom = std::max(bottom, cache.map_at(pb).imag());
        if (d.inside(pt)) top = std::min(top, cache.map_at(pt).imag());
    }
    const double ix = 0.01 * (right - left), iy = 0.01 * (top - bottom);
    img.x0 = left + ix;
    img.width = (right - left) - 2 * ix;
    img.ymin = bottom + iy;
    img.ymax = top - iy;
}


// Image of the horizontal period: map two points one source period apart that
// both lie inside the window (scanning for a row clear of the boundary).
cplx period_image(const ForwardCache& cache, const Domain& d, cplx ref) {
    const double xc = d.x0 + 0.5 * d.width;
    std::vector<double> rows{ref.imag()};
    for (int k = 0; k <= 16; ++k)
        rows.push_back(d.ymin + (d.ymax - d.ymin) * k / 16.0);
    const double clear = 0.01 * std::min(d.width, d.ymax - d.ymin);
    for (double fy : rows) {
        const cplx w1(xc - 0.5 * d.period, fy), w2(xc + 0.5 * d.period, fy);
        if (d.inside(w1) && d.inside(w2) && d.boundary_clearance(w1) > clear &&
            d.boundary_clearance(w2) > clear)
            return cache.map_at(w2) - cache.map_at(w1);
    }
    throw OutsideDomain("period measurement: no clear row of the window");
}

// psi edge increment: (b - a)/2 - 2 conj(∫ u_z^2 dz).
cplx psi_edge(const StreamData& sd, cplx a, cplx b) {
    if (a == b) return 0.0;
    const cplx I2 = num::integrate_contour([&](cplx z) { const cplx u = sd.uz(z); return u * u; },
                                           num::ContourPath::segment(a, b));
    return 0.5 * (b - a) - 2.0 * std::conj(I2);
}

double u_edge(const StreamData& sd, cplx a, cplx b) {
    if (a == b) return 0.0;
    return (2.0 * num::integrate_contour(sd.uz, num::ContourPath::segment(a, b))).real();
}

std::pair<cplx, cplx> psi_deriv(const StreamData& sd, cplx z) {
    const cplx u = sd.uz(z);
    return {cplx(0.5), -2.0 * std::conj(u) * std::conj(u)};
}

cplx dF_edge(const GraphData& gd, cplx a, cplx b) {
    if (a == b) return 0.0;
    const double dx = (b - a).real(), dy = (b - a).imag();
    return num::integrate_param(
        [&](double s) {
            const cplx z = a + s * (b - a);
            const cplx G = gd.grad(z);
            if (!std::isfinite(G.real()) || !std::isfinite(G.imag()))
                throw NonFiniteGradient("dF integration hit a non-finite gradient");
            const double vx = G.real(), vy = G.imag();
            const double W = std::sqrt(1.0 + vx * vx + vy * vy);
            const cplx cx = 1.0 + (1.0 + vx * vx) / W + cplx(0, 1) * (vx * vy / W);
            const cplx cy = cplx(0, 1) + vx * vy / W + cplx(0, 1) * ((1.0 + vy * vy) / W);
            return cx * dx + cy * dy;
        },
        0.0, 1.0);
}

std::pair<cplx, cplx> dF_deriv(const GraphData& gd, cplx z) {
    const cplx G = gd.grad(z);
    const double vx = G.real(), vy = G.imag();
    const double W = std::sqrt(1.0 + vx * vx + vy * vy);
    const cplx cx = 1.0 + (1.0 + vx * vx) / W + cplx(0, 1) * (vx * vy / W);
    const cplx cy = cplx(0, 1) + vx * vy / W + cplx(0, 1) * ((1.0 + vy * vy) / W);
    return {0.5 * (cx - cplx(0, 1) * cy), 0.5 * (cx + cplx(0, 1) * cy)};
}

std::mt19937 probe_rng(unsigned seed) { return std::mt19937(seed); }

std::vector<cplx> interior_probes(const Domain& dom, int count, unsigned seed,
                                  double clearance) {
    std::mt19937 rng = probe_rng(seed);
    std::uniform_real_distribution<double> ux(dom.x0, dom.x0 + dom.width);
    std::uniform_real_distribution<double> uy(dom.ymin, dom.ymax);
    std::vector<cplx> out;
    for (int guard = 0; int(out.size()) < count && guard < 200 * count; ++guard) {
        const cplx z(ux(rng), uy(rng));
        if (dom.inside(z) && dom.boundary_clearance(z) > clearance) out.push_back(z);
    }
    if (int(out.size()) < count)
        throw OutsideDomain("could not sample enough interior probe points");
    return out;
}

}  // namespace

// ---- psi ---------------------------------------------------------------------

MapSample psi_map(const StreamData& sd, const std::vector<cplx>& path) {
    if (path.empty()) throw std::invalid_argument("psi_map: empty path");
    cplx w = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) w += psi_edge(sd, path[k], path[k + 1]);
    MapSample s;
    s.source = path.back();
    s.image = w;
    std::tie(s.d_z, s.d_zbar) = psi_deriv(sd, path.back());
    s.jacobian_det = std::norm(s.d_z) - std::norm(s.d_zbar);
    return s;
}

VortexToMinimal vortex_to_minimal(const StreamData& sd, const ProbeOptions& opt) {
    // Interior precondition |2 u_z| < 1 on random probes.
    const double clear_v =
        0.005 * std::min(sd.domain.width, sd.domain.ymax - sd.domain.ymin);
    for (cplx z : interior_probes(sd.domain, std::min(opt.probes, 100), opt.seed, clear_v)) {
        if (std::abs(2.0 * sd.uz(z)) >= 1.0)
            throw NotSubunitGradient("interior probe with |grad u| >= 1");
    }

    auto cache = std::make_shared<ForwardCache>(
        sd.domain, sd.z0, cplx(0.0), sd.u0, opt.grid,
        [&sd](cplx a, cplx b) { return psi_edge(sd, a, b); },
        [&sd](cplx a, cplx b) { return u_edge(sd, a, b); },
        [&sd](cplx z) { return psi_deriv(sd, z); });

    VortexToMinimal out;
    out.cache = cache;
    out.psi = [cache](cplx z) { return cache->map_at(z); };

    // Window: image of the source window through the map at its corners,
    // then period, then the boundary components (translates of the source
    // ones, shifted by whole periods into the window).
    Domain img;
    const Domain& d = sd.domain;
    image_window(*cache, d, img);
    if (d.period != 0.0) img.period = period_image(*cache, d, sd.z0).real();
    const double xc = img.x0 + 0.5 * img.width;
    for (const auto& poly : sd.domain.boundary) {
        cplx tau = 0.0;
        const std::size_t stride = std::max<std::size_t>(1, poly.size() / 8);
        std::size_t cnt = 0;
        for (std::size_t k = 0; k < poly.size(); k += stride) {
            tau += cache->map_at(poly[k]) - poly[k];
            ++cnt;
        }
        tau /= double(cnt);
        out.boundary_translations.push_back(tau);
        cplx centroid = 0.0;
        for (cplx w : poly) centroid += w + tau;
        centroid /= double(poly.size());
        cplx shift = tau;
        if (img.period != 0.0)
            shift -= img.period * std::round((centroid.real() - xc) / img.period);
        std::vector<cplx> shifted(poly.size());
        for (std::size_t k = 0; k < poly.size(); ++k) shifted[k] = poly[k] + shift;
        img.boundary.push_back(std::move(shifted));
    }

    GraphData graph;
    graph.domain = img;
    graph.v = [cache, tol = opt.tol](cplx w) { return cache->val_at(cache->invert(w, tol)); };
    graph.grad = [cache, uz = sd.uz, tol = opt.tol](cplx w) {
        const cplx z = cache->invert(w, tol);
        const cplx u = uz(z);
        const double s = 1.0 - 4.0 * std::norm(u);
        return 4.0 * std::conj(u) / s;
    };
    out.graph = std::move(graph);
    out.data.g = [uz = sd.uz](cplx z) { return -1.0 / (2.0 * uz(z)); };
    out.data.omega = [uz = sd.uz](cplx z) { return 2.0 * uz(z); };
    return out;
}

// ---- dF and F --------------------------------------------------------------------

DFCoefficients graph_dF(const GraphData& gd, cplx point, double fd_step) {
    auto coeffs = [&](cplx z) {
        const cplx G = gd.grad(z);
        if (!std::isfinite(G.real()) || !std::isfinite(G.imag()))
            throw NonFiniteGradient("graph_dF: non-finite gradient");
        const double vx = G.real(), vy = G.imag();
        const double W = std::sqrt(1.0 + vx * vx + vy * vy);
        const cplx cx = 1.0 + (1.0 + vx * vx) / W + cplx(0, 1) * (vx * vy / W);
        const cplx cy = cplx(0, 1) + vx * vy / W + cplx(0, 1) * ((1.0 + vy * vy) / W);
        return std::pair<cplx, cplx>(cx, cy);
    };
    DFCoefficients out{};
    std::tie(out.cx, out.cy) = coeffs(point);
    const double h = fd_step;
    const cplx cx_yp = coeffs(point + cplx(0, h)).first;
    const cplx cx_ym = coeffs(point - cplx(0, h)).first;
    const cplx cy_xp = coeffs(point + cplx(h, 0)).second;
    const cplx cy_xm = coeffs(point - cplx(h, 0)).second;
    out.closedness = std::abs((cx_yp - cx_ym) / (2 * h) - (cy_xp - cy_xm) / (2 * h));
    return out;
}

MapSample f_map(const GraphData& gd, const std::vector<cplx>& path) {
    if (path.empty()) throw std::invalid_argument("f_map: empty path");
    cplx w = path.front();
    for (std::size_t k = 0; k + 1 < path.size(); ++k) w += dF_edge(gd, path[k], path[k + 1]);
    MapSample s;
    s.source = path.back();
    s.image = w;
    std::tie(s.d_z, s.d_zbar) = dF_deriv(gd, path.back());
    s.jacobian_det = std::norm(s.d_z) - std::norm(s.d_zbar);
    return s;
}

MinimalToVortex minimal_to_vortex(const GraphData& gd, const ProbeOptions& opt) {
    // Anchor so that the round trip is the identity up to translation.
    const cplx anchor(gd.domain.x0 + 0.5 * gd.domain.width,
                      0.5 * (gd.domain.ymin + gd.domain.ymax));
    cplx anchor0 = anchor;
    if (!gd.domain.inside(anchor0)) {
        // Fall back to a sampled interior point.
        anchor0 = interior_probes(gd.domain, 1, opt.seed + 7, 1e-3).front();
    }

    const double clear_g =
        0.005 * std::min(gd.domain.width, gd.domain.ymax - gd.domain.ymin);
    for (cplx w : interior_probes(gd.domain, std::min(opt.probes, 100), opt.seed, clear_g)) {
        const cplx G = gd.grad(w);
        if (!std::isfinite(G.real()) || !std::isfinite(G.imag()))
            throw NonFiniteGradient("graph probe with non-finite gradient");
        // Recovered |g| = (1 + sqrt(1 + |G|^2))/|G| must exceed 1.
        const double aG = std::abs(G);
        if (aG > 0.0 && (1.0 + std::sqrt(1.0 + aG * aG)) / aG <= 1.0)
            throw NotExpanding("graph probe violates |g| > 1");
    }

    auto cache = std::make_shared<ForwardCache>(
        gd.domain, anchor0, anchor0, gd.v(anchor0), opt.grid,
        [&gd](cplx a, cplx b) { return dF_edge(gd, a, b); },
        [&gd](cplx a, cplx b) { return gd.v(b) - gd.v(a); },
        [&gd](cplx z) { return dF_deriv(gd, z); });

    MinimalToVortex out;
    out.cache = cache;
    out.F = [cache](cplx w) { return cache->map_at(w); };

    Domain img;
    const Domain& d = gd.domain;
    image_window(*cache, d, img);
    if (d.period != 0.0) img.period = period_image(*cache, d, anchor0).real();

    const double xc = img.x0 + 0.5 * img.width;
    for (const auto& poly : gd.domain.boundary) {
        // The gradient blows up on the graph boundary, so F is sampled at
        // inward offsets delta, delta/2, delta/4 and extrapolated to the
        // boundary (the local behavior is F0 + c sqrt(delta) + e delta, so a
        // quadratic in x = sqrt(delta) is fitted and evaluated at x = 0).
        cplx centroid = 0.0;
        for (cplx w : poly) centroid += w;
        centroid /= double(poly.size());
        cplx tau = 0.0;
        const std::size_t stride = std::max<std::size_t>(1, poly.size() / 8);
        std::size_t cnt = 0;
        const double delta = 2e-3;
        // Lagrange weights at x = 0 for nodes x, x/sqrt(2), x/2.
        const double r = 1.0 / std::sqrt(2.0);
        const double L1 = (r * r * r) / ((1 - r) * (1 - r * r));
        const double L2 = (r * r) / ((r - 1) * (r - r * r));
        const double L3 = r / ((r * r - 1) * (r * r - r));
        for (std::size_t k = 0; k < poly.size(); k += stride) {
            // Into the domain: away from the bubble centroid.
            const cplx outward = (poly[k] - centroid) / std::abs(poly[k] - centroid);
            const cplx f1 = cache->map_at(poly[k] + delta * outward);
            const cplx f2 = cache->map_at(poly[k] + 0.5 * delta * outward);
            const cplx f3 = cache->map_at(poly[k] + 0.25 * delta * outward);
            const cplx f0 = L1 * f1 + L2 * f2 + L3 * f3;
            tau += f0 - poly[k];
            ++cnt;
        }
        tau /= double(cnt);
        if (img.period != 0.0)
            tau -= img.period *
                   std::round((centroid.real() + tau.real() - xc) / img.period);
        std::vector<cplx> mapped(poly.size());
        for (std::size_t k = 0; k < poly.size(); ++k) mapped[k] = poly[k] + tau;
        img.boundary.push_back(std::move(mapped));
    }

    StreamData sd;
    sd.domain = img;
    sd.z0 = cache->map_at(anchor0);
    sd.u0 = gd.v(anchor0);
    sd.uz = [cache, grad = gd.grad, tol = opt.tol](cplx z) {
        const cplx w = cache->invert(z, tol);
        const cplx G = grad(w);
        const double aG = std::abs(G);
        if (aG == 0.0) return cplx(0.0);
        // |g| = (1 + sqrt(1 + |G|^2))/|G|, g = -G (|g|^2 - 1)/2, u_z = -1/(2 g).
        const double mag = (1.0 + std::sqrt(1.0 + aG * aG)) / aG;
        const cplx g = -G * (mag * mag - 1.0) / 2.0;
        return -1.0 / (2.0 * g);
    };
    out.stream = std::move(sd);
    return out;
}

RoundTrip roundtrip_check(const StreamData& sd, const ProbeOptions& opt) {
    VortexToMinimal vm = vortex_to_minimal(sd, opt);
    MinimalToVortex mv = minimal_to_vortex(vm.graph, opt);
    const auto probes = interior_probes(sd.domain, opt.probes, opt.seed + 1,
                                        0.02 * std::min(sd.domain.width,
                                                        sd.domain.ymax - sd.domain.ymin));
    std::vector<cplx> dev;
    for (cplx z : probes) {
        const cplx w = vm.cache->map_at(z);
        const cplx z2 = mv.cache->map_at(w);
        dev.push_back(z2 - z);
    }
    cplx mean = 0.0;
    for (cplx d : dev) mean += d;
    mean /= double(dev.size());
    RoundTrip rt;
    rt.translation = mean;
    for (cplx d : dev) rt.max_deviation = std::max(rt.max_deviation, std::abs(d - mean));
    return rt;
}

double circulation(const StreamData& sd, const std::vector<cplx>& gamma, double tol) {
    const cplx I = num::integrate_contour([&](cplx z) { return 2.0 * sd.uz(z); },
                                          num::ContourPath::polyline(gamma, true));
    const cplx C = cplx(0, 1) * I;
    if (std::abs(C.imag()) > tol)
        throw NonRealCirculation("circulation has imaginary part " +
                                 std::to_string(C.imag()));
    return C.real();
}

cplx velocity(const StreamData& sd, cplx z) {
    return cplx(0, -2.0) * std::conj(sd.uz(z));
}

}  // namespace hvlab::cor
