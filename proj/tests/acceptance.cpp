// Acceptance gate: eight end-to-end criteria, one PASS/FAIL line each.
// Exits nonzero when any criterion fails.
#include "hvlab/builder.hpp"
#include "hvlab/configurations.hpp"
#include "hvlab/correspondence.hpp"
#include "hvlab/io.hpp"
#include "hvlab/numeric.hpp"
#include "hvlab/weierstrass.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace hvlab;
using num::cplx;

namespace {

constexpr double pi = std::numbers::pi;
const cplx iu(0.0, 1.0);

int g_failures = 0;

void verdict(int criterion, bool pass, const std::string& what) {
    std::printf("%s  criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

cfg::FiniteConfiguration random_finite(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
        std::vector<cplx> pts;
        std::vector<double> ws;
        for (int i = 0; i < n; ++i) {
            pts.emplace_back(u(rng), u(rng));
            double w = u(rng);
            ws.push_back(std::abs(w) < 0.1 ? 0.5 : w);
        }
        try {
            return cfg::FiniteConfiguration(pts, ws);
        } catch (const std::invalid_argument&) {
        }
    }
}

cfg::PeriodicConfiguration random_periodic(std::mt19937& rng, int n, bool case_a) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
        std::vector<cplx> pts;
        std::vector<double> ws;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            pts.emplace_back(u(rng) + 3.0, u(rng));  // keep away from 0
            double w = u(rng);
            if (std::abs(w) < 0.1) w = 0.5;
            ws.push_back(w);
            sum += w;
        }
        cplx c0;
        if (case_a) {
            ws.back() -= sum;
            if (std::abs(ws.back()) < 1e-6) continue;
            c0 = cplx(u(rng), u(rng));
            if (std::abs(c0) < 0.1) c0 = cplx(0.7, 0.3);
        } else {
            c0 = -0.5 * sum;
            if (std::abs(c0) < 0.1) continue;
        }
        try {
            return cfg::PeriodicConfiguration(
                pts, ws, c0, case_a ? cfg::PeriodicCase::a : cfg::PeriodicCase::b);
        } catch (const std::invalid_argument&) {
        }
    }
}

// ---- criterion 1: conservation identities on random configurations -------------

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(101);
    std::uniform_int_distribution<int> nd(2, 8);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto c = random_finite(rng, nd(rng));
        const auto [s1, s2] = cfg::finite_identities(c);
        worst = std::max({worst, std::abs(s1), std::abs(s2)});
    }
    for (int k = 0; k < 100; ++k) {
        const auto c = random_periodic(rng, nd(rng), k % 2 == 0);
        cplx sum = 0.0;
        for (cplx F : cfg::periodic_forces(c)) sum += F;
        worst = std::max(worst, std::abs(sum));
    }
    const double dt = seconds_since(t0);
    verdict(1, worst <= 1e-12 && dt < 1.0,
            fmt("identity residuals on 200 random configurations: max %.3g "
                "(tol 1e-12), %.2f s (budget 1 s)",
                worst, dt));
}

// ---- criterion 2: closed-form street coordinates -------------------------------

void criterion2() {
    auto dq_over_pi = [](cplx c0) {
        const auto s = cfg::vonkarman_street(c0);
        const auto q = cfg::q_coordinates(s.points);
        return (q[1] - q[0]) / pi;
    };
    double worst = 0.0;
    // Reference spacings in units of pi, 4-digit figure precision.
    worst = std::max(worst,
                     std::abs(dq_over_pi(0.25) - cplx(-1.0, -std::log(3.0) / pi)));
    worst = std::max(worst, std::abs(dq_over_pi(1.0) - cplx(0.0, -std::log(3.0) / pi)));
    worst = std::max(
        worst, std::abs(dq_over_pi(std::exp(-iu * pi / 4.0)) - cplx(0.2406, -0.2041)));
    const auto tl = cfg::three_lane(-1.5);
    const auto q = cfg::q_coordinates(tl.points);
    // Lanes at imaginary parts +-ln(3 + 2 sqrt(2)) ~= +-0.5611 pi.
    double top = 0.0, bot = 0.0;
    for (const cplx& qi : q) {
        top = std::max(top, qi.imag() / pi);
        bot = std::min(bot, qi.imag() / pi);
    }
    worst = std::max({worst, std::abs(top - 0.5611), std::abs(bot + 0.5611)});
    verdict(2, worst <= 1e-3,
            fmt("two-row and three-lane street coordinates vs 4-digit references: "
                "max deviation %.3g in units of pi (tol 1e-3)",
                worst));
}

// ---- criterion 3: Newton recovery of the five-point uneven street -------------

void criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto ref = cfg::uneven_street();
    const auto qref = cfg::q_coordinates(ref.points);
    // Perturb the first four positions by 0.02-magnitude offsets; the last
    // point is the solver's gauge and stays at the reference value.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.02, 0.02);
    auto seed = ref;
    for (int i = 0; i + 1 < ref.n(); ++i) {
        const cplx dq(u(rng), u(rng));
        seed.points[i] = std::exp(-iu * (qref[i] + dq));
    }
    cfg::ForceReport rep;
    const auto solved = cfg::balance_solve(seed, &rep);
    const auto qs = cfg::q_coordinates(solved.points);
    double worst = 0.0;
    for (int i = 0; i < ref.n(); ++i)
        worst = std::max(worst, std::abs(qs[i] - qref[i]) / pi);
    // Spot-check the first listed coordinate explicitly.
    worst = std::max(worst,
                     std::abs(qs[0] / pi - cplx(-0.6666666664, -0.02936340626)));
    const double dt = seconds_since(t0);
    verdict(3, worst <= 1e-4 && dt < 5.0,
            fmt("perturbed-seed Newton recovers the five-point street: max "
                "deviation %.3g in units of pi (tol 1e-4), %.2f s (budget 5 s)",
                worst, dt));
}

// ---- criterion 4: contour periods equal 2 pi i F_i ----------------------------

void criterion4() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(404);
    std::uniform_int_distribution<int> nd(2, 5);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto c = random_periodic(rng, nd(rng), k % 2 == 0);
        const auto F = cfg::periodic_forces(c);
        try {
            const bld::BuilderInput input(c, 1e-4);
            for (int i = 0; i < c.n(); ++i)
                worst = std::max(
                    worst, std::abs(bld::period_integral(input, i) -
                                    2.0 * pi * iu * F[i]));
        } catch (const bld::ComponentsMerged&) {
            --k;  // configuration too tight to trace; draw another
        }
    }
    const double dt = seconds_since(t0);
    verdict(4, worst <= 1e-8 && dt < 10.0,
            fmt("contour period vs 2 pi i F_i on 50 random configurations: max "
                "residual %.3g (tol 1e-8), %.2f s (budget 10 s)",
                worst, dt));
}

// ---- criterion 5: builder quantitative checks at t = 0.05 ---------------------

void criterion5() {
    const double t = 0.05;
    bool pass = true;
    std::string note;

    const bld::BuilderInput street(cfg::vonkarman_street(0.25), t);
    const auto built = bld::build_domain(street, 64);
    double circ = 0.0;
    for (std::size_t i = 0; i < built.circulations.size(); ++i)
        circ = std::max(circ, std::abs(std::abs(built.circulations[i]) - 2.0 * pi * t));
    const auto [r0, rinf] = bld::residues_g_omega(street);
    const double res = std::max(std::abs(r0 - (-iu / t)), std::abs(rinf - iu / t));
    const double vlim = std::max(std::abs(built.v_plus - t * std::conj(cplx(0.25))),
                                 std::abs(built.v_minus - t * std::conj(cplx(0.25))));
    const auto ab = bld::prop_ab_check(built);
    pass = circ <= 1e-8 && res <= 1e-8 && vlim <= 1e-6 && ab.classification == 'a' &&
           ab.class_residual <= 1e-6;

    const bld::BuilderInput lanes(cfg::three_lane(-1.5), t);
    const auto built3 = bld::build_domain(lanes, 64);
    const double vlim3 =
        std::max(std::abs(built3.v_plus - (-t * lanes.config.c0)),
                 std::abs(built3.v_minus - (t * lanes.config.c0)));
    const auto ab3 = bld::prop_ab_check(built3);
    pass = pass && vlim3 <= 1e-6 && ab3.classification == 'b' &&
           ab3.class_residual <= 1e-6;

    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "street t=0.05: circulations %.2g (tol 1e-8), residues %.2g (tol "
                  "1e-8), v-limits %.2g/%.2g (tol 1e-6), classifications %c/%c with "
                  "residuals %.2g/%.2g (tol 1e-6)",
                  circ, res, vlim, vlim3, ab.classification, ab3.classification,
                  ab.class_residual, ab3.class_residual);
    verdict(5, pass, buf);
}

// ---- criterion 6: closure-defect scaling ---------------------------------------

void criterion6() {
    // Balanced street: |defect| / t^2 must decrease strictly over t in
    // {0.04, 0.02, 0.01}. The defect of a balanced configuration is zero at
    // all orders here, so the quotient is rounding noise; the check is kept
    // as stated and allowed to fail.
    const auto street = cfg::vonkarman_street(0.25);
    double ratio[3];
    const double ts[3] = {0.04, 0.02, 0.01};
    for (int k = 0; k < 3; ++k) {
        const bld::BuilderInput input(street, ts[k]);
        double m = 0.0;
        for (int i = 0; i < street.n(); ++i)
            m = std::max(m, std::abs(bld::closure_defect(input, i)));
        ratio[k] = m / (ts[k] * ts[k]);
    }
    const bool balanced_ok = ratio[0] > ratio[1] && ratio[1] > ratio[2];

    // Unbalanced variant: p1 shifted by 0.1; |defect|/t^2 -> 2 pi |F_i|.
    auto pert = street;
    pert.points[0] += 0.1;
    const auto F = cfg::periodic_forces(pert);
    const double target = 2.0 * pi * std::abs(F[0]);
    const bld::BuilderInput input(pert, 0.005);
    const double measured = std::abs(bld::closure_defect(input, 0)) / (0.005 * 0.005);
    const bool unbalanced_ok = std::abs(measured - target) <= 0.1 * target;

    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "defect scaling: balanced |d|/t^2 = {%.3g, %.3g, %.3g} %s "
                  "(strict decrease required; identically-zero defect leaves only "
                  "noise), unbalanced %.6g vs 2 pi |F| = %.6g %s (10%%)",
                  ratio[0], ratio[1], ratio[2],
                  balanced_ok ? "decreasing" : "NOT monotone", measured, target,
                  unbalanced_ok ? "within" : "OUTSIDE");
    verdict(6, balanced_ok && unbalanced_ok, buf);
}

// ---- criterion 7: correspondence property suite --------------------------------

void criterion7() {
    const auto t0 = std::chrono::steady_clock::now();
    const double t = 0.005;  // small t: boundary data exact to ~5e-8
    const bld::BuilderInput input(cfg::vonkarman_street(0.25), t);
    const auto built = bld::build_domain(input, 64);
    const auto sd = bld::stream_view(built, input);
    cor::ProbeOptions opt;
    opt.grid = 64;
    const auto vm = cor::vortex_to_minimal(sd, opt);
    const auto mv = cor::minimal_to_vortex(vm.graph, opt);

    std::mt19937 rng(777);
    auto sample = [&](const cor::Domain& d) {
        std::uniform_real_distribution<double> ux(d.x0, d.x0 + d.width);
        std::uniform_real_distribution<double> uy(d.ymin, d.ymax);
        const double clear =
            0.02 * std::min(d.width, d.ymax - d.ymin);
        for (;;) {
            const cplx z(ux(rng), uy(rng));
            if (d.inside(z) && d.boundary_clearance(z) > clear) return z;
        }
    };

    // Contraction |psi(z1) - psi(z2)| <= |z1 - z2| on 200 random pairs.
    int contraction_bad = 0;
    for (int k = 0; k < 200; ++k) {
        const cplx a = sample(sd.domain), b = sample(sd.domain);
        if (std::abs(vm.psi(a) - vm.psi(b)) > std::abs(a - b) * (1.0 + 1e-9) + 1e-12)
            ++contraction_bad;
    }
    // Expansion |F(w1) - F(w2)| >= |w1 - w2| on 200 random pairs.
    int expansion_bad = 0;
    for (int k = 0; k < 200; ++k) {
        const cplx a = sample(vm.graph.domain), b = sample(vm.graph.domain);
        if (std::abs(mv.F(a) - mv.F(b)) < std::abs(a - b) * (1.0 - 1e-9) - 1e-12)
            ++expansion_bad;
    }

    // Boundary-translation constancy: psi(gamma) - gamma constant per component.
    double constancy = 0.0;
    for (const auto& curve : sd.domain.boundary) {
        std::vector<cplx> dev;
        for (std::size_t j = 0; j + 1 < curve.size(); j += 16)
            dev.push_back(vm.psi(curve[j]) - curve[j]);
        cplx mean = 0.0;
        for (cplx d : dev) mean += d;
        mean /= double(dev.size());
        for (cplx d : dev) constancy = std::max(constancy, std::abs(d - mean));
    }

    // Round trip F(psi(z)) = z + constant.
    std::vector<cplx> dev;
    for (int k = 0; k < opt.probes; ++k) {
        const cplx z = sample(sd.domain);
        dev.push_back(mv.F(vm.psi(z)) - z);
    }
    cplx mean = 0.0;
    for (cplx d : dev) mean += d;
    mean /= double(dev.size());
    double roundtrip = 0.0;
    for (cplx d : dev) roundtrip = std::max(roundtrip, std::abs(d - mean));

    // Derivative link against the builder's independent Gauss map:
    // 2 u_z(w) * g(w) = -1 with g = -i / (t f(e^{-i w})).
    double link = 0.0;
    for (int k = 0; k < 50; ++k) {
        const cplx w = sample(sd.domain);
        const cplx g = -iu / (t * bld::f_eval(input, std::exp(-iu * w)));
        link = std::max(link, std::abs(2.0 * sd.uz(w) * g + 1.0));
    }

    const double dt = seconds_since(t0);
    const bool pass = contraction_bad == 0 && expansion_bad == 0 &&
                      constancy <= 1e-6 && roundtrip <= 1e-6 && link <= 1e-8 &&
                      dt < 30.0;
    char buf[384];
    std::snprintf(buf, sizeof buf,
                  "correspondence at t=0.005: contraction %d/200 violations, "
                  "expansion %d/200, boundary translation constancy %.3g (tol "
                  "1e-6), round trip %.3g (tol 1e-6), derivative link %.3g (tol "
                  "1e-8), %.1f s (budget 30 s)",
                  contraction_bad, expansion_bad, constancy, roundtrip, link, dt);
    verdict(7, pass, buf);
}

// ---- criterion 8: classical catalog --------------------------------------------

void criterion8() {
    struct Entry {
        const char* name;
        std::optional<double> a;
        int expected_components;  // -1: gate on double periodicity instead
    };
    const Entry entries[] = {
        {"scherk", std::nullopt, 2},
        {"karcher", 0.5, 2},
        {"schwarzP", std::nullopt, -1},
        {"schwarzH", 0.5, -1},
    };
    bool pass = true;
    std::string detail;
    for (const auto& e : entries) {
        const auto data = wst::classical_data(e.name, e.a);
        const auto art = wst::domain_image(data, 160);

        double max_len = 0.0;
        for (const auto& b : art.boundaries) {
            double len = 0.0;
            for (std::size_t j = 0; j + 1 < b.polyline.size(); ++j)
                len += std::abs(b.polyline[j + 1] - b.polyline[j]);
            max_len = std::max(max_len, len);
        }
        const double gap = art.report.at("boundary_closure_gap").get<double>();
        const double vres =
            art.report.at("boundary_velocity_residual").get<double>();

        // Mean-value residual of u = Re(integral of omega) on a small circle.
        const cplx zc(0.3, 0.3);
        const cplx branch0 = std::sqrt(data.Q.eval(zc));
        double usum = 0.0;
        const int m = 32;
        for (int j = 0; j < m; ++j) {
            const cplx zj = zc + 1e-2 * std::exp(iu * (2.0 * pi * j / m));
            usum += wst::immersion(data, {0.0, 0.0, 0.0}, {zc, zj}, branch0).X[2];
        }
        const double harmonic = std::abs(usum / m);

        const int count = int(art.boundaries.size());
        const bool doubly = art.report.at("periodicity").get<std::string>() ==
                            "doubly";
        bool ok = gap <= 1e-6 * max_len && vres <= 1e-6 && harmonic <= 1e-6;
        if (e.expected_components >= 0)
            ok = ok && count == e.expected_components;
        else
            ok = ok && doubly;

        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "%s[%s: gap %.2g, |v|-1 %.2g, harmonic %.2g, %d comp %s]",
                      detail.empty() ? "" : " ", e.name, gap, vres, harmonic,
                      count, doubly ? "doubly" : "singly");
        detail += buf;
        pass = pass && ok;
    }
    verdict(8, pass,
            "classical catalog (tol: gap 1e-6*length, velocity 1e-6, harmonic "
            "1e-6; scherk/karcher expect 2 components, P/H doubly periodic):" +
                detail);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    std::printf("%d/8 criteria passed\n", 8 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
