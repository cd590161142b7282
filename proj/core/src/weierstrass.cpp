#include "hvlab/weierstrass.hpp"

#include "marching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace hvlab::wst {

using std::numbers::pi;

// ---- polynomials ----------------------------------------------------------------

void Polynomial::trim() {
    while (coeffs.size() > 1 && coeffs.back() == cplx(0.0)) coeffs.pop_back();
    if (coeffs.empty()) coeffs.push_back(cplx(0.0));
}

cplx Polynomial::eval(cplx z) const {
    cplx v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) v = v * z + coeffs[i];
    return v;
}

Polynomial Polynomial::derivative() const {
    if (coeffs.size() <= 1) return Polynomial{cplx(0.0)};
    std::vector<cplx> d(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = double(i) * coeffs[i];
    return Polynomial(std::move(d));
}

RationalFunction::RationalFunction(Polynomial n, Polynomial d)
    : num(std::move(n)), den(std::move(d)) {
    const cplx lead = den.coeffs.back();
    if (lead == cplx(0.0))
        throw std::invalid_argument("rational function: zero denominator");
    if (lead != cplx(1.0)) {
        for (cplx& c : num.coeffs) c /= lead;
        for (cplx& c : den.coeffs) c /= lead;
    }
}

cplx RationalFunction::eval(cplx z) const { return num.eval(z) / den.eval(z); }

// ---- branch tracking --------------------------------------------------------------

void BranchState::advance(cplx q) {
    const cplx s = std::sqrt(q);
    if (std::abs(s) == 0.0)
        throw BranchPointOnPath("sqrt branch tracking hit a zero of Q");
    value = (std::abs(s - value) <= std::abs(s + value)) ? s : -s;
    ++steps;
}

namespace {

constexpr double kMaxBranchAngle = 0.2;  // max sqrt rotation per step (radians)

// Walks from (a, sa) to b, subdividing until each step rotates the branch by
// less than kMaxBranchAngle; returns the branch at b.
cplx continue_branch(const Polynomial& Q, cplx a, cplx sa, cplx b, int depth = 0) {
    if (depth > 48)
        throw BranchPointOnPath("branch continuation could not resolve the sheet "
                                "(path too close to a zero of Q)");
    cplx s = std::sqrt(Q.eval(b));
    if (std::abs(s - sa) > std::abs(s + sa)) s = -s;
    if (std::abs(s) == 0.0 || std::abs(sa) == 0.0)
        throw BranchPointOnPath("path passes through a zero of Q");
    const double angle = std::abs(std::arg(s / sa));
    if (angle < kMaxBranchAngle && std::abs(s / sa) > 0.2 && std::abs(s / sa) < 5.0)
        return s;
    const cplx mid = 0.5 * (a + b);
    const cplx sm = continue_branch(Q, a, sa, mid, depth + 1);
    return continue_branch(Q, mid, sm, b, depth + 1);
}

cplx rational_eval_checked(const RationalFunction& r, cplx z) {
    const cplx den = r.den.eval(z);
    if (std::abs(den) < 1e-13 * (1.0 + std::abs(z)))
        throw PoleOnPath("path passes through a pole");
    return r.num.eval(z) / den;
}

}  // namespace

std::vector<cplx> eval_omega(const WeierstrassData& data, const std::vector<cplx>& path,
                             cplx branch0, BranchState* final_state) {
    if (path.empty()) return {};
    std::vector<cplx> out(path.size());
    cplx s = data.has_branch() ? branch0 : cplx(1.0);
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (data.has_branch() && i > 0)
            s = continue_branch(data.Q, path[i - 1], s, path[i]);
        out[i] = rational_eval_checked(data.R, path[i]) / s;
    }
    if (final_state) {
        final_state->value = s;
        final_state->steps = path.size();
    }
    return out;
}

cplx integrate_form(const WeierstrassData& data, const std::vector<cplx>& path,
                    cplx branch0, const std::function<cplx(cplx)>& h,
                    BranchState* final_state) {
    if (path.size() < 2) {
        if (final_state) final_state->value = data.has_branch() ? branch0 : cplx(1.0);
        return 0.0;
    }
    cplx total = 0.0;
    cplx s = data.has_branch() ? branch0 : cplx(1.0);
    num::QuadratureSettings q;  // defaults: 1e-10
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const cplx a = path[i], b = path[i + 1];
        if (a == b) continue;
        cplx sb = s;
        if (data.has_branch()) sb = continue_branch(data.Q, a, s, b);
        const cplx sa = s;
        auto integrand = [&](double tau) {
            const cplx z = a + tau * (b - a);
            cplx sz(1.0);
            if (data.has_branch()) {
                sz = std::sqrt(data.Q.eval(z));
                const cplx ref = sa + tau * (sb - sa);
                if (std::abs(sz - ref) > std::abs(sz + ref)) sz = -sz;
            }
            return h(z) * rational_eval_checked(data.R, z) / sz * (b - a);
        };
        total += num::integrate_param(integrand, 0.0, 1.0, q);
        s = sb;
    }
    if (final_state) {
        final_state->value = s;
        final_state->steps = path.size();
    }
    return total;
}

// ---- immersion and Gauss map ----------------------------------------------------------

std::array<double, 3> gauss_map(cplx g) {
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) || std::abs(g) > 1e12)
        return {0.0, 0.0, 1.0};
    const double n2 = std::norm(g);
    const double d = n2 + 1.0;
    return {2.0 * g.real() / d, 2.0 * g.imag() / d, (n2 - 1.0) / d};
}

ImmersionSample immersion(const WeierstrassData& data, const std::array<double, 3>& X0,
                          const std::vector<cplx>& path, cplx branch0) {
    if (path.empty()) throw std::invalid_argument("immersion: empty path");
    auto gf = [&](cplx z) { return data.g.eval(z); };
    BranchState st;
    const cplx I1 = integrate_form(
        data, path, branch0, [&](cplx z) { const cplx g = gf(z); return 0.5 * (1.0 / g - g); });
    const cplx I2 = integrate_form(
        data, path, branch0,
        [&](cplx z) { const cplx g = gf(z); return cplx(0, 0.5) * (1.0 / g + g); });
    const cplx I3 = integrate_form(data, path, branch0, [](cplx) { return cplx(1.0); }, &st);

    ImmersionSample out;
    out.z = path.back();
    out.X = {X0[0] + I1.real(), X0[1] + I2.real(), X0[2] + I3.real()};
    const cplx gz = gf(out.z);
    out.N = gauss_map(gz);
    const double om = std::abs(rational_eval_checked(data.R, out.z) / st.value);
    const double ag = std::abs(gz);
    out.ds_factor = 0.5 * (ag + 1.0 / ag) * om;
    return out;
}

// ---- catalog --------------------------------------------------------------------------

WeierstrassData classical_data(const std::string& name, std::optional<double> a) {
    WeierstrassData d;
    d.name = name;
    d.g = RationalFunction(Polynomial{cplx(1.0)}, Polynomial{cplx(0.0), cplx(1.0)});
    const cplx i(0.0, 1.0);

    if (name == "scherk") {
        d.R = RationalFunction(Polynomial{cplx(0.0), cplx(1.0)},
                               Polynomial{cplx(1.0), cplx(0.0), cplx(6.0), cplx(0.0),
                                          cplx(1.0)});
        const double r = std::sqrt(2.0) - 1.0;
        d.punctures = {i * r, -i * r};
        d.domain_hint = "unit disk minus two punctures on the imaginary axis";
    } else if (name == "karcher") {
        if (!a || !(*a > 0.0 && *a < 1.0))
            throw ParameterOutOfRange("karcher requires 0 < a < 1");
        const double av = *a;
        const double m = av * av + 1.0 / (av * av);
        d.R = RationalFunction(Polynomial{cplx(1.0)}, Polynomial{cplx(1.0)});
        d.Q = Polynomial{cplx(1.0), cplx(0.0), cplx(m), cplx(0.0), cplx(1.0)};
        d.punctures = {cplx(0.0)};
        d.branch_points = {i * av, -i * av};
        d.domain_hint = "unit disk minus the origin, double cover";
    } else if (name == "schwarzP") {
        // omega carries an extra factor i so that it is imaginary along the
        // boundary lifts of |z| = 1 (stream function constant per component).
        d.R = RationalFunction(Polynomial{cplx(0.0), i}, Polynomial{cplx(1.0)});
        d.Q = Polynomial{cplx(1.0), 0, 0, 0, cplx(-14.0), 0, 0, 0, cplx(1.0)};
        const double r = std::sqrt(2.0 - std::sqrt(3.0));
        for (int k = 0; k < 4; ++k)
            d.branch_points.push_back(r * std::exp(i * (0.5 * pi * k)));
        d.domain_hint = "unit disk, double cover branched at four points";
        d.doubly_periodic = true;
    } else if (name == "schwarzH") {
        if (!a || !(*a > 0.0 && *a < 1.0))
            throw ParameterOutOfRange("schwarzH requires 0 < a < 1");
        const double av = *a;
        const double m = av * av * av + 1.0 / (av * av * av);
        d.R = RationalFunction(Polynomial{cplx(0.0), cplx(1.0)}, Polynomial{cplx(1.0)});
        d.Q = Polynomial{cplx(0.0), cplx(1.0), 0, 0, cplx(m), 0, 0, cplx(1.0)};
        d.branch_points = {cplx(0.0)};
        for (int k = 0; k < 3; ++k)
            d.branch_points.push_back(-av * std::exp(i * (2.0 * pi * k / 3.0)));
        d.domain_hint = "unit disk, double cover branched at the origin and "
                        "three points";
        d.doubly_periodic = true;
    } else {
        throw ParameterOutOfRange("unknown classical data set: " + name);
    }
    return d;
}

// ---- domain image -----------------------------------------------------------------------

namespace {

using detail::Contourer;
using detail::GridPoint;

double min_dist(cplx z, const std::vector<cplx>& pts) {
    double d = 1e300;
    for (cplx p : pts) d = std::min(d, std::abs(z - p));
    return d;
}

}  // namespace

io::DomainArtifact domain_image(const WeierstrassData& data, int grid,
                                int streamline_levels) {
    if (grid < 16) throw std::invalid_argument("domain_image: grid too small");
    const cplx iu(0.0, 1.0);
    auto gf = [&](cplx z) { return data.g.eval(z); };

    std::vector<cplx> obstacles = data.punctures;
    obstacles.insert(obstacles.end(), data.branch_points.begin(),
                     data.branch_points.end());

    // --- boundary lifts of |z| = 1 (offset angles keep radial grid lines off
    // the branch-point rays) ---
    const int ntheta = grid;
    const int mult = std::max(1, 4096 / ntheta);
    const int N = mult * ntheta;
    std::vector<cplx> zb(N + 1), fb(N + 1), wb(N + 1), sb(N + 1);
    for (int j = 0; j <= N; ++j) zb[j] = std::exp(iu * (2.0 * pi * (j + 0.5) / N));
    zb[N] = zb[0];
    cplx s = std::sqrt(data.Q.eval(zb[0]));
    for (int j = 0; j <= N; ++j) {
        if (data.has_branch() && j > 0) s = continue_branch(data.Q, zb[j - 1], s, zb[j]);
        sb[j] = data.has_branch() ? s : cplx(1.0);
        const cplx w = rational_eval_checked(data.R, zb[j]) / sb[j];
        wb[j] = w;
        fb[j] = gf(zb[j]) * w;
    }
    const bool monodromy_trivial =
        !data.has_branch() || std::abs(sb[N] - sb[0]) < 1e-6 * std::abs(sb[0]);

    // Cumulative trapezoid of phi = -∫ g omega and u = Re ∫ omega.
    std::vector<cplx> phi1(N + 1);
    std::vector<double> u1(N + 1);
    phi1[0] = 0.0;
    u1[0] = 0.0;
    // Trapezoid in theta with the exact differential dz = i z dtheta: on the
    // full closed circle this is spectrally accurate for the analytic
    // integrand (chord-based trapezoid leaves an O(N^-2) closure gap).
    cplx acc_phi = 0.0, acc_u = 0.0;
    const double dth = 2.0 * pi / N;
    for (int j = 1; j <= N; ++j) {
        acc_phi += 0.5 * (fb[j] * iu * zb[j] + fb[j - 1] * iu * zb[j - 1]) * dth;
        acc_u += 0.5 * (wb[j] * iu * zb[j] + wb[j - 1] * iu * zb[j - 1]) * dth;
        phi1[j] = -acc_phi;
        u1[j] = acc_u.real();
    }
    const double closure1 = std::abs(phi1[N] - phi1[0]);

    io::DomainArtifact art;
    io::BoundaryComponent b1;
    b1.id = 0;
    b1.polyline.assign(phi1.begin(), phi1.end() - 1);
    b1.u_value = u1[0];
    art.boundaries.push_back(std::move(b1));

    // --- sheet connection (second boundary lift) for branched covers ---
    cplx K = 0.0;
    double Ku = 0.0;
    bool two_sheets = data.has_branch() && monodromy_trivial;
    if (two_sheets) {
        // Continue phi and u from z0 = zb[0] around one branch point and back:
        // the walk ends on the other sheet; its value there is the offset.
        cplx bsel = 0.0;
        double best = -1.0;
        for (cplx b : data.branch_points) {
            if (std::abs(b) < 1e-12) continue;
            std::vector<cplx> others;
            for (cplx o : obstacles)
                if (std::abs(o - b) > 1e-12) others.push_back(o);
            // Clearance of the access segment from all other special points.
            double clear = 1e300;
            for (int k = 0; k <= 40; ++k) {
                const cplx zk = zb[0] + (k / 40.0) * (b - zb[0]);
                clear = std::min(clear, min_dist(zk, others));
            }
            if (clear > best) {
                best = clear;
                bsel = b;
            }
        }
        const double delta = std::min(0.08, 0.4 * best);
        const double beta = std::arg(zb[0] - bsel);
        const cplx entry = bsel + delta * std::exp(iu * beta);
        std::vector<cplx> walk;
        const int M = 256;
        for (int k = 0; k <= M; ++k) walk.push_back(zb[0] + (k / double(M)) * (entry - zb[0]));
        for (int k = 1; k <= 2 * M; ++k)
            walk.push_back(bsel + delta * std::exp(iu * (beta + pi * k / double(M))));
        for (int k = 1; k <= M; ++k)
            walk.push_back(entry + (k / double(M)) * (zb[0] - entry));
        BranchState st;
        const cplx Iphi =
            integrate_form(data, walk, sb[0], [&](cplx z) { return gf(z); }, &st);
        const cplx Iu = integrate_form(data, walk, sb[0], [](cplx) { return cplx(1.0); });
        if (std::abs(st.value + sb[0]) > 1e-6 * std::abs(sb[0]))
            two_sheets = false;  // loop failed to change sheets; single lift only
        K = -Iphi;
        Ku = Iu.real();
    }
    double closure2 = 0.0;
    if (two_sheets) {
        io::BoundaryComponent b2;
        b2.id = 1;
        b2.polyline.resize(N);
        for (int j = 0; j < N; ++j) b2.polyline[j] = K - phi1[j];
        closure2 = closure1;
        b2.u_value = Ku - u1[0];
        art.boundaries.push_back(std::move(b2));
    }

    // --- translation periods ---
    if (data.doubly_periodic) {
        // Cycles around branch-point pairs ("stadium" contours).
        std::vector<std::pair<cplx, cplx>> pairs;
        const auto& bp = data.branch_points;
        if (bp.size() >= 3) {
            // Pick two independent pairs with good clearance.
            pairs.emplace_back(bp[0], bp[1]);
            pairs.emplace_back(bp.size() >= 4 ? bp[1] : bp[0],
                               bp[2]);
        }
        for (const auto& [bA, bB] : pairs) {
            const double eps = 0.06;
            const cplx dir = (bB - bA) / std::abs(bB - bA);
            const cplx nv = iu * dir;
            std::vector<cplx> c;
            const int M = 200;
            for (int k = 0; k <= M; ++k)
                c.push_back(bA + eps * nv + (k / double(M)) * (bB - bA));
            const double a0 = std::arg(nv);
            for (int k = 1; k <= M; ++k)
                c.push_back(bB + eps * std::exp(iu * (a0 - pi * k / double(M))));
            for (int k = 1; k <= M; ++k)
                c.push_back(bB - eps * nv + (k / double(M)) * (bA - bB));
            for (int k = 1; k <= M; ++k)
                c.push_back(bA + eps * std::exp(iu * (a0 - pi - pi * k / double(M))));
            const cplx s0 = std::sqrt(data.Q.eval(c[0]));
            const cplx P = -integrate_form(data, c, s0, [&](cplx z) { return gf(z); });
            art.periods.push_back(P);
        }
    } else if (!data.punctures.empty()) {
        // Singly periodic: the period is the phi increment around a puncture.
        const cplx p = data.punctures.front();
        double clearance = 1.0 - std::abs(p);  // distance to the unit circle
        for (cplx q : obstacles)
            if (std::abs(q - p) > 1e-12) clearance = std::min(clearance, std::abs(q - p));
        const double r = std::max(1e-3, 0.5 * std::min(0.25, clearance));
        std::vector<cplx> c;
        const int M = 256;
        for (int k = 0; k <= M; ++k)
            c.push_back(p + r * std::exp(iu * (2.0 * pi * k / double(M))));
        // Reach the loop's branch by continuation along a radial approach.
        cplx sc(1.0);
        if (data.has_branch()) {
            sc = sb[0];
            std::vector<cplx> seg;
            for (int k = 0; k <= 64; ++k) seg.push_back(zb[0] + (k / 64.0) * (c[0] - zb[0]));
            BranchState st;
            integrate_form(data, seg, sc, [](cplx) { return cplx(0.0); }, &st);
            sc = st.value;
        }
        const cplx P = -integrate_form(data, c, sc, [&](cplx z) { return gf(z); });
        art.periods.push_back(P);
    }

    // --- interior grid: phi and u by radial continuation from the boundary ---
    const int nr = grid;
    const double rmin = 0.04, rmax = 1.0 - 1e-6;
    const double guard = 0.02;
    const int sheets = two_sheets ? 2 : 1;
    std::vector<GridPoint> gp(std::size_t(sheets) * nr * ntheta);
    auto P = [&](int sheet, int ir, int jt) -> GridPoint& {
        return gp[(std::size_t(sheet) * nr + ir) * ntheta + jt];
    };

    io::parallel_for(std::size_t(ntheta), [&](std::size_t jt) {
        const int j0 = int(jt) * mult;  // matching boundary sample
        // Radial samples from the boundary inward (log-spaced).
        std::vector<double> rs(nr);
        for (int ir = 0; ir < nr; ++ir)
            rs[ir] = std::exp(std::log(rmax) +
                              (std::log(rmin) - std::log(rmax)) * ir / double(nr - 1));
        const cplx e = zb[j0] / std::abs(zb[j0]);
        cplx sprev = sb[j0];
        cplx zprev = zb[j0];
        cplx acc_gw = 0.0, acc_w = 0.0;
        cplx fprev = fb[j0], wprev = wb[j0];
        bool dead = false;  // set once the column passes a puncture
        for (int ir = 0; ir < nr && !dead; ++ir) {
            const cplx z = rs[ir] * e;
            const bool guarded = min_dist(z, obstacles) < guard;
            if (min_dist(z, data.punctures) < guard) {
                dead = true;  // the integrand blows up; stop the column here
                break;
            }
            cplx snow = sprev;
            if (data.has_branch()) {
                try {
                    snow = continue_branch(data.Q, zprev, sprev, z);
                } catch (const BranchPointOnPath&) {
                    dead = true;
                    break;
                }
            }
            const cplx w = rational_eval_checked(data.R, z) / snow;
            const cplx f = gf(z) * w;
            const cplx dz = z - zprev;
            acc_gw += 0.5 * (f + fprev) * dz;
            acc_w += 0.5 * (w + wprev) * dz;
            sprev = snow;
            zprev = z;
            fprev = f;
            wprev = w;
            if (guarded) continue;  // sample kept out of the contouring grid

            GridPoint& g0 = P(0, ir, int(jt));
            g0.phi = phi1[j0] - acc_gw;
            g0.u = u1[j0] + acc_w.real();
            g0.valid = true;
            if (two_sheets) {
                // Second sheet: s -> -s flips both integrands.
                GridPoint& g1 = P(1, ir, int(jt));
                g1.phi = (K - phi1[j0]) + acc_gw;
                g1.u = (Ku - u1[j0]) - acc_w.real();
                g1.valid = true;
            }
        }
    });

    // --- streamline levels ---
    double ubmin = 1e300, ubmax = -1e300;
    for (const auto& b : art.boundaries) {
        ubmin = std::min(ubmin, b.u_value);
        ubmax = std::max(ubmax, b.u_value);
    }
    if (ubmax - ubmin < 1e-9) {
        // Degenerate boundary range (single component): span the bulk of the
        // interior u values instead.
        std::vector<double> us;
        for (const auto& g : gp)
            if (g.valid) us.push_back(g.u);
        if (!us.empty()) {
            std::sort(us.begin(), us.end());
            ubmin = us[std::size_t(0.05 * (us.size() - 1))];
            ubmax = us[std::size_t(0.95 * (us.size() - 1))];
        }
    }
    std::vector<double> levels;
    for (int k = 1; k <= streamline_levels; ++k)
        levels.push_back(ubmin + (ubmax - ubmin) * k / double(streamline_levels + 1));

    for (double level : levels) {
        Contourer ct;
        for (int sheet = 0; sheet < sheets; ++sheet)
            for (int ir = 0; ir + 1 < nr; ++ir)
                for (int jt = 0; jt < ntheta; ++jt) {
                    const int jn = (jt + 1) % ntheta;
                    ct.add_cell(P(sheet, ir, jt), P(sheet, ir, jn), P(sheet, ir + 1, jn),
                                P(sheet, ir + 1, jt), level);
                }
        for (auto& line : ct.stitch()) {
            io::Streamline sl;
            sl.level = level;
            sl.polyline = std::move(line);
            art.streamlines.push_back(std::move(sl));
        }
    }

    // --- velocity samples on the boundary: v = i * conj(1/g) has |v| = 1 ---
    double vel_residual = 0.0;
    const int stride = std::max(1, N / 128);
    for (int j = 0; j < N; j += stride) {
        const cplx v = iu * std::conj(1.0 / gf(zb[j]));
        vel_residual = std::max(vel_residual, std::abs(std::abs(v) - 1.0));
        art.velocity.push_back({phi1[j], v});
        if (two_sheets) art.velocity.push_back({K - phi1[j], v});
    }

    // --- u constancy on the boundary lifts ---
    double udev = 0.0;
    for (int j = 0; j <= N; ++j) udev = std::max(udev, std::abs(u1[j] - u1[0]));

    art.report = io::json{
        {"schema", 1},
        {"name", data.name},
        {"component_count", art.boundaries.size()},
        {"periodicity", data.doubly_periodic ? "doubly" : "singly"},
        {"boundary_closure_gap", std::max(closure1, closure2)},
        {"boundary_u_deviation", udev},
        {"boundary_velocity_residual", vel_residual},
        {"sheet_connection", io::json::array({K.real(), K.imag()})},
        {"sheet_connection_u", Ku},
        {"grid", grid},
    };
    return art;
}

}  // namespace hvlab::wst
