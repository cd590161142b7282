#include "hvlab/builder.hpp"

#include "marching.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hvlab::bld {

using std::numbers::pi;

namespace {

constexpr cplx kI(0.0, 1.0);

// Distance from p_i to the nearest other special point (other p_j or 0).
double clearance(const cfg::PeriodicConfiguration& c, int i) {
    double d = std::abs(c.points[i]);
    for (int j = 0; j < c.n(); ++j)
        if (j != i) d = std::min(d, std::abs(c.points[i] - c.points[j]));
    return d;
}

cplx f_eval_raw(const cfg::PeriodicConfiguration& c, const std::vector<cplx>& a,
                double guard, cplx z) {
    cplx v = c.c0;
    for (int i = 0; i < c.n(); ++i) {
        const cplx d = z - c.points[i];
        if (std::abs(d) < guard)
            throw PoleEvaluation("f evaluated at a configuration point");
        v += a[i] * z / d;
    }
    return v;
}

// Radius r(theta) with |t f(p_i + r e^{i theta})| = 1: bracketing + bisection
// on the radial profile, which decreases from the pole at r = 0.
double radial_solve(const cfg::PeriodicConfiguration& c, const std::vector<cplx>& a,
                    double t, int i, double theta) {
    const cplx p = c.points[i];
    const cplx e = std::exp(kI * theta);
    const double rmax = 0.45 * clearance(c, i);
    auto h = [&](double r) {
        return std::abs(t * f_eval_raw(c, a, 0.0, p + r * e)) - 1.0;
    };
    double rl = std::min(0.5 * t * std::abs(a[i] * p), 0.5 * rmax);
    for (int k = 0; k < 60 && h(rl) <= 0.0; ++k) rl *= 0.5;
    if (h(rl) <= 0.0)
        throw ComponentsMerged("boundary trace: no radius with |t f| > 1 near p_i");
    double rh = rl;
    while (h(rh) > 0.0) {
        rh *= 1.4;
        if (rh > rmax)
            throw ComponentsMerged("boundary trace: level set |t f| = 1 reaches the "
                                   "midpoint to a neighboring vortex (t too large)");
    }
    for (int k = 0; k < 100 && rh - rl > 1e-16 * rh; ++k) {
        const double rm = 0.5 * (rl + rh);
        (h(rm) > 0.0 ? rl : rh) = rm;
    }
    const double r = 0.5 * (rl + rh);
    // Reject non-graph level sets: |t f| must stay below 1 well past the root.
    const double rp = std::min(2.0 * r, rmax);
    if (rp > r * 1.01 && h(rp) >= 0.0)
        throw ComponentsMerged("boundary trace: radial profile re-crosses |t f| = 1");
    return r;
}

bool trace_all_ok(const cfg::PeriodicConfiguration& c, const std::vector<cplx>& a,
                  double t, int n_angles) {
    try {
        for (int i = 0; i < c.n(); ++i)
            for (int k = 0; k < n_angles; ++k)
                radial_solve(c, a, t, i, 2.0 * pi * k / n_angles);
        return true;
    } catch (const ComponentsMerged&) {
        return false;
    } catch (const PoleEvaluation&) {
        return false;
    }
}

std::vector<cplx> default_a(const cfg::PeriodicConfiguration& c,
                            const std::optional<std::vector<cplx>>& a) {
    if (!a) return std::vector<cplx>(c.weights.begin(), c.weights.end());
    return *a;
}

}  // namespace

BuilderInput::BuilderInput(cfg::PeriodicConfiguration cfg_, double t_,
                           std::optional<std::vector<cplx>> a_)
    : config(std::move(cfg_)), t(t_), a(default_a(config, a_)) {
    if (!(t > 0.0)) throw std::invalid_argument("builder: t must be > 0");
    if (int(a.size()) != config.n())
        throw std::invalid_argument("builder: need one coefficient a_i per point");
    cplx sum = 0.0;
    for (cplx v : a) sum += v;
    const cplx target =
        config.kase == cfg::PeriodicCase::a ? cplx(0.0) : -2.0 * config.c0;
    if (std::abs(sum - target) > 1e-10)
        throw std::invalid_argument("builder: coefficient sum rule violated "
                                    "(sum a = 0 in case a, -2 c0 in case b)");
    // Fast accept: t <= 0.8 * t_max iff tracing succeeds at t / 0.8. Only on
    // rejection is the full bisection run, to report the actual limit.
    if (!trace_all_ok(config, this->a, t / 0.8, 64)) {
        const double tm = t_max(config, a);
        throw ComponentsMerged("builder: t = " + std::to_string(t) +
                               " exceeds 0.8 * t_max = " + std::to_string(0.8 * tm));
    }
}

cplx f_eval(const BuilderInput& input, cplx z) {
    return f_eval_raw(input.config, input.a, 1e-13, z);
}

cplx omega0_eval(const cfg::PeriodicConfiguration& config, cplx z) {
    if (std::abs(z) < 1e-13)
        throw PoleEvaluation("omega0 evaluated at the origin");
    cplx v = config.c0 / z;
    for (int i = 0; i < config.n(); ++i) {
        const cplx d = z - config.points[i];
        if (std::abs(d) < 1e-13)
            throw PoleEvaluation("omega0 evaluated at a configuration point");
        v += config.weights[i] / d;
    }
    return v;
}

double t_max(const cfg::PeriodicConfiguration& config,
             std::optional<std::vector<cplx>> a) {
    const std::vector<cplx> av = default_a(config, a);
    const int probe_angles = 64;
    double lo = 1e-6;
    if (!trace_all_ok(config, av, lo, probe_angles))
        throw ComponentsMerged("t_max: tracing fails even at t = 1e-6");
    double hi = lo;
    while (trace_all_ok(config, av, hi * 2.0, probe_angles) && hi < 1e3) hi *= 2.0;
    hi *= 2.0;
    for (int k = 0; k < 48; ++k) {
        const double mid = 0.5 * (lo + hi);
        (trace_all_ok(config, av, mid, probe_angles) ? lo : hi) = mid;
    }
    return lo;
}

std::vector<cplx> trace_boundary(const BuilderInput& input, int i, int n_angles) {
    if (i < 0 || i >= input.config.n())
        throw std::invalid_argument("trace_boundary: component index out of range");
    if (n_angles < 256) n_angles = 256;
    std::vector<cplx> out(n_angles);
    const cplx p = input.config.points[i];
    // theta decreasing: clockwise, the orientation of the flow-domain boundary.
    for (int k = 0; k < n_angles; ++k) {
        const double theta = 2.0 * pi * (n_angles - k) / n_angles;
        const double r = radial_solve(input.config, input.a, input.t, i, theta);
        out[k] = p + r * std::exp(kI * theta);
    }
    return out;
}

std::pair<cplx, cplx> residues_g_omega(const BuilderInput& input) {
    double rmin = 1e300, rmax = 0.0;
    for (cplx p : input.config.points) {
        rmin = std::min(rmin, std::abs(p));
        rmax = std::max(rmax, std::abs(p));
    }
    auto integrand = [&](cplx z) {
        const cplx g_t = -kI / (input.t * f_eval(input, z));
        return g_t * omega0_eval(input.config, z);
    };
    const cplx two_pi_i = 2.0 * pi * kI;
    const cplx res0 =
        num::integrate_contour(integrand, num::ContourPath::circle(0.0, 0.5 * rmin)) /
        two_pi_i;
    const cplx res_inf =
        -num::integrate_contour(integrand, num::ContourPath::circle(0.0, 3.0 * rmax)) /
        two_pi_i;
    return {res0, res_inf};
}

cplx period_integral(const BuilderInput& input, int i) {
    if (i < 0 || i >= input.config.n())
        throw std::invalid_argument("period_integral: component index out of range");
    const double r = 0.4 * clearance(input.config, i);
    auto integrand = [&](cplx z) {
        return f_eval(input, z) * omega0_eval(input.config, z);
    };
    return num::integrate_contour(integrand,
                                  num::ContourPath::circle(input.config.points[i], r));
}

cplx closure_defect(const BuilderInput& input, int i) {
    const std::vector<cplx> curve = trace_boundary(input, i, 1024);
    auto integrand = [&](cplx z) {
        return f_eval(input, z) * omega0_eval(input.config, z);
    };
    const cplx I = num::integrate_contour(
        integrand, num::ContourPath::polyline(curve, /*closed=*/true));
    return kI * input.t * input.t * std::conj(I);
}

BuiltDomain build_domain(const BuilderInput& input, int grid) {
    const auto& c = input.config;
    const int n = c.n();
    BuiltDomain out;
    out.t = input.t;
    out.t_limit = t_max(c, input.a);

    bool a_is_c = true;
    for (int i = 0; i < n; ++i)
        if (std::abs(input.a[i] - cplx(c.weights[i])) > 1e-14) a_is_c = false;

    // Base point on the positive real axis unless a vortex obstructs it.
    cplx z0(1.0, 0.0);
    for (int tries = 0; tries < 64; ++tries) {
        bool clear = true;
        for (cplx p : c.points)
            if (std::abs(p - z0) < 0.2) clear = false;
        if (clear) break;
        z0 *= std::exp(kI * 0.1);
    }

    auto g_t_omega = [&](cplx z) {
        return -kI / (input.t * f_eval(input, z)) * input.t * omega0_eval(c, z);
    };

    for (int i = 0; i < n; ++i) {
        std::vector<cplx> zc = trace_boundary(input, i, 512);
        std::vector<cplx> wc(zc.size());
        if (a_is_c) {
            // g_t t omega0 = -i dz/z identically: phi = i log z, continued.
            double arg = std::arg(zc[0]);
            wc[0] = kI * std::log(std::abs(zc[0])) - arg;
            for (std::size_t k = 1; k < zc.size(); ++k) {
                arg += std::arg(zc[k] / zc[k - 1]);
                wc[k] = kI * std::log(std::abs(zc[k])) - arg;
            }
        } else {
            // phi(z) = phi(z0) - ∫ g_t t omega0 from z0, anchored at i log z0.
            const double rho = std::abs(zc[0]);
            std::vector<cplx> approach{z0, z0 * rho};
            const double dth = std::arg(zc[0] / (z0 * rho / std::abs(z0 * rho)));
            for (int k = 1; k <= 64; ++k)
                approach.push_back(rho * std::exp(kI * (std::arg(z0) + dth * k / 64.0)));
            cplx w = kI * std::log(z0);
            w -= num::integrate_contour(g_t_omega, num::ContourPath::polyline(approach));
            wc[0] = w;
            for (std::size_t k = 1; k < zc.size(); ++k) {
                w -= num::integrate_contour(g_t_omega,
                                            num::ContourPath::segment(zc[k - 1], zc[k]));
                wc[k] = w;
            }
        }

        // Circulation C_i = i * clockwise ∮ t omega0 (must be real).
        const cplx C =
            kI * input.t *
            num::integrate_contour([&](cplx z) { return omega0_eval(c, z); },
                                   num::ContourPath::polyline(zc, /*closed=*/true));
        out.circulations.push_back(C.real());

        // Mean boundary stream-function value.
        double usum = 0.0;
        for (cplx z : zc) {
            double u = input.t * (c.c0.real() * std::log(std::abs(z)) -
                                  c.c0.imag() * std::arg(z));
            for (int j = 0; j < n; ++j)
                u += input.t * c.weights[j] * std::log(std::abs(z - c.points[j]));
            usum += u;
        }
        out.u_values.push_back(usum / double(zc.size()));

        out.defects.push_back(closure_defect(input, i));

        // Velocity field t conj(f) at boundary image points (|v| = 1 there).
        const std::size_t stride = std::max<std::size_t>(1, zc.size() / 32);
        for (std::size_t k = 0; k < zc.size(); k += stride)
            out.velocity.push_back({wc[k], input.t * std::conj(f_eval(input, zc[k]))});

        out.z_curves.push_back(std::move(zc));
        out.w_curves.push_back(std::move(wc));
    }

    // Velocity limits: z -> infinity is y -> +infinity under phi = i log z.
    out.v_plus = input.t * std::conj(f_eval(input, cplx(1e6, 0.0)));
    out.v_minus = input.t * std::conj(f_eval(input, cplx(1e-6, 0.0)));

    // Periodicity: the phi increment along a loop around z = 0 must be 2 pi.
    double rmin = 1e300;
    for (cplx p : c.points) rmin = std::min(rmin, std::abs(p));
    const cplx period = -num::integrate_contour(
        g_t_omega, num::ContourPath::circle(0.0, 0.5 * rmin));
    out.periodicity_residual = std::abs(std::abs(period) - 2.0 * pi);

    // Log-polar stream-function grid clipped to the flow domain |t f| < 1.
    double rmax = 0.0;
    for (cplx p : c.points) rmax = std::max(rmax, std::abs(p));
    const double lr0 = std::log(rmin) - 1.5, lr1 = std::log(rmax) + 1.5;
    out.grid_ntheta = grid;
    out.grid_nr = grid;
    out.grid_w.resize(std::size_t(grid) * grid);
    out.grid_u.resize(std::size_t(grid) * grid);
    out.grid_valid.assign(std::size_t(grid) * grid, 0);
    io::parallel_for(std::size_t(grid), [&](std::size_t jt) {
        const double theta = -pi + 2.0 * pi * (double(jt) + 0.5) / grid;
        for (int ir = 0; ir < grid; ++ir) {
            const double lr = lr0 + (lr1 - lr0) * ir / double(grid - 1);
            const cplx z = std::exp(cplx(lr, theta));
            const std::size_t idx = jt * grid + ir;
            out.grid_w[idx] = cplx(-theta, lr);  // i log z
            double near = 1e300;
            for (cplx p : c.points) near = std::min(near, std::abs(z - p));
            if (near < 1e-6) continue;
            if (std::abs(input.t * f_eval_raw(c, input.a, 0.0, z)) >= 1.0) continue;
            double u = input.t * (c.c0.real() * lr - c.c0.imag() * theta);
            for (int j = 0; j < n; ++j)
                u += input.t * c.weights[j] * std::log(std::abs(z - c.points[j]));
            out.grid_u[idx] = u;
            out.grid_valid[idx] = 1;
        }
    });
    return out;
}

AbReport prop_ab_check(const BuiltDomain& built, double T, double tol) {
    double sumC = 0.0;
    for (double Ci : built.circulations) sumC += Ci;
    const cplx vp = built.v_plus, vm = built.v_minus;
    AbReport rep;
    rep.flux_residual = std::abs(sumC - T * (std::conj(vp) - std::conj(vm)));
    rep.velocity_residual =
        std::abs(T * (std::conj(vp) * std::conj(vp) - std::conj(vm) * std::conj(vm)));

    const double scale = std::max({1.0, std::abs(vp), std::abs(vm)});
    const double res_a = std::max(std::abs(vp - vm), std::abs(sumC)) / scale;
    const double res_b =
        std::max({std::abs(vp + vm), std::abs(vp - sumC / (2.0 * T)),
                  std::abs(vp.imag())}) /
        scale;
    if (std::min(res_a, res_b) > tol)
        throw Unclassifiable("velocity limits/circulations match neither case "
                             "(a) nor case (b) within tolerance");
    rep.classification = res_a <= res_b ? 'a' : 'b';
    rep.class_residual = std::min(res_a, res_b);
    return rep;
}

io::DomainArtifact to_artifact(const BuiltDomain& built, int streamline_levels) {
    io::DomainArtifact art;
    for (std::size_t i = 0; i < built.w_curves.size(); ++i) {
        io::BoundaryComponent b;
        b.id = int(i);
        b.polyline = built.w_curves[i];
        b.circulation = built.circulations[i];
        b.u_value = built.u_values[i];
        art.boundaries.push_back(std::move(b));
    }
    art.periods.push_back(cplx(2.0 * pi, 0.0));

    double umin = 1e300, umax = -1e300;
    for (double u : built.u_values) {
        umin = std::min(umin, u);
        umax = std::max(umax, u);
    }
    if (umax - umin < 1e-9) {
        std::vector<double> us;
        for (std::size_t k = 0; k < built.grid_u.size(); ++k)
            if (built.grid_valid[k]) us.push_back(built.grid_u[k]);
        if (!us.empty()) {
            std::sort(us.begin(), us.end());
            umin = us[std::size_t(0.05 * (us.size() - 1))];
            umax = us[std::size_t(0.95 * (us.size() - 1))];
        }
    }
    const int nt = built.grid_ntheta, nr = built.grid_nr;
    auto node = [&](int jt, int ir) {
        detail::GridPoint g;
        const std::size_t idx = std::size_t(jt) * nr + ir;
        g.phi = built.grid_w[idx];
        g.u = built.grid_u[idx];
        g.valid = built.grid_valid[idx] != 0;
        return g;
    };
    for (int k = 1; k <= streamline_levels; ++k) {
        const double level = umin + (umax - umin) * k / double(streamline_levels + 1);
        detail::Contourer ct(1.0);
        for (int jt = 0; jt + 1 < nt; ++jt)
            for (int ir = 0; ir + 1 < nr; ++ir)
                ct.add_cell(node(jt, ir), node(jt + 1, ir), node(jt + 1, ir + 1),
                            node(jt, ir + 1), level);
        for (auto& line : ct.stitch()) {
            io::Streamline sl;
            sl.level = level;
            sl.polyline = std::move(line);
            art.streamlines.push_back(std::move(sl));
        }
    }

    art.velocity = built.velocity;

    io::json defects = io::json::array();
    for (cplx d : built.defects) defects.push_back({d.real(), d.imag()});
    art.report = io::json{
        {"schema", 1},
        {"t", built.t},
        {"t_max", built.t_limit},
        {"circulations", built.circulations},
        {"u_values", built.u_values},
        {"closure_defects", defects},
        {"v_plus", {built.v_plus.real(), built.v_plus.imag()}},
        {"v_minus", {built.v_minus.real(), built.v_minus.imag()}},
        {"periodicity_residual", built.periodicity_residual},
    };
    return art;
}

cor::StreamData stream_view(const BuiltDomain& built, const BuilderInput& input,
                            double pad) {
    cor::StreamData sd;
    sd.domain.boundary = built.w_curves;
    sd.domain.period = 2.0 * pi;

    double xmin = 1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& curve : built.w_curves)
        for (cplx w : curve) {
            xmin = std::min(xmin, w.real());
            ymin = std::min(ymin, w.imag());
            ymax = std::max(ymax, w.imag());
        }
    // One period plus margin so both ends of a period segment are interior.
    sd.domain.x0 = xmin - 0.25 * pad;
    sd.domain.width = 2.0 * pi + 0.5 * pad;
    sd.domain.ymin = ymin - pad;
    sd.domain.ymax = ymax + pad;

    sd.z0 = cplx(sd.domain.x0 + 0.5 * sd.domain.width, ymax + 0.6 * pad);
    // u at the base point from the closed-form stream function in z.
    {
        const auto& c = input.config;
        const double lr = sd.z0.imag(), theta = -sd.z0.real();
        const cplx z = std::exp(cplx(lr, theta));
        double u = input.t * (c.c0.real() * lr - c.c0.imag() * theta);
        for (int j = 0; j < c.n(); ++j)
            u += input.t * c.weights[j] * std::log(std::abs(z - c.points[j]));
        sd.u0 = u;
    }
    sd.uz = [input](cplx w) {
        return cplx(0.0, -0.5) * input.t * f_eval(input, std::exp(cplx(0, -1) * w));
    };
    return sd;
}

}  // namespace hvlab::bld
