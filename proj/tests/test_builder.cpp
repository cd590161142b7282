#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hvlab/builder.hpp"
#include "hvlab/configurations.hpp"

#include <cmath>
#include <random>

using namespace hvlab;
using num::cplx;

namespace {
constexpr double pi = 3.14159265358979323846;
const cplx iu(0.0, 1.0);

cfg::PeriodicConfiguration street() { return cfg::vonkarman_street(0.25); }

cfg::PeriodicConfiguration random_periodic(std::mt19937& rng, int n, bool case_a) {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (;;) {
        std::vector<cplx> pts;
        std::vector<double> ws;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            pts.emplace_back(u(rng) + 2.5, u(rng));
            double w = u(rng);
            if (std::abs(w) < 0.1) w = 0.4;
            ws.push_back(w);
            sum += w;
        }
        cplx c0;
        if (case_a) {
            ws.back() -= sum;
            if (std::abs(ws.back()) < 1e-6) continue;
            c0 = cplx(u(rng), u(rng));
            if (std::abs(c0) < 0.1) c0 = cplx(0.6, -0.2);
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

}  // namespace

TEST_CASE("velocity profile values at 0 and infinity") {
    const bld::BuilderInput a_in(street(), 0.05);
    CHECK(std::abs(bld::f_eval(a_in, cplx(1e-300)) - cplx(0.25)) < 1e-12);
    CHECK(std::abs(bld::f_eval(a_in, cplx(1e12)) - cplx(0.25)) < 1e-10);
    const bld::BuilderInput b_in(cfg::three_lane(-1.5), 0.05);
    CHECK(std::abs(bld::f_eval(b_in, cplx(1e-300)) - cplx(-0.25)) < 1e-12);
    CHECK(std::abs(bld::f_eval(b_in, cplx(1e12)) - cplx(0.25)) < 1e-10);
}

TEST_CASE("omega0 equals f dz/z when the coefficients default to the weights") {
    const bld::BuilderInput in(street(), 0.05);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const cplx z(u(rng) + 3.0, u(rng));
        CHECK(std::abs(bld::omega0_eval(in.config, z) - bld::f_eval(in, z) / z) <=
              1e-12);
    }
}

TEST_CASE("input validation: coefficient sum rule and t range") {
    CHECK_THROWS_AS(bld::BuilderInput(street(), 0.05,
                                      std::vector<cplx>{cplx(1.0), cplx(-0.5)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(bld::BuilderInput(street(), -0.1), std::invalid_argument);
    // t above 0.8 t_max is a geometry failure with the measured limit reported.
    const double tm = bld::t_max(street());
    try {
        bld::BuilderInput in(street(), 0.9 * tm);
        FAIL("expected ComponentsMerged");
    } catch (const bld::ComponentsMerged& e) {
        CHECK(std::string(e.what()).find("t_max") != std::string::npos);
    }
}

TEST_CASE("boundary trace sits on the level set, oriented clockwise") {
    const bld::BuilderInput in(street(), 0.05);
    for (int i = 0; i < 2; ++i) {
        const auto curve = bld::trace_boundary(in, i, 256);
        REQUIRE(curve.size() >= 256);
        for (cplx z : curve)
            CHECK(std::abs(std::abs(in.t * bld::f_eval(in, z)) - 1.0) <= 1e-10);
        double area2 = 0.0;  // shoelace: negative for clockwise
        for (std::size_t k = 0; k + 1 < curve.size(); ++k)
            area2 += curve[k].real() * curve[k + 1].imag() -
                     curve[k + 1].real() * curve[k].imag();
        CHECK(area2 < 0.0);
    }
}

TEST_CASE("boundary components become circular as t shrinks") {
    auto roundness = [&](double t) {
        const bld::BuilderInput in(street(), t);
        const auto curve = bld::trace_boundary(in, 0, 256);
        cplx c = 0.0;
        for (cplx z : curve) c += z;
        c /= double(curve.size());
        double rmin = 1e300, rmax = 0.0;
        for (cplx z : curve) {
            rmin = std::min(rmin, std::abs(z - c));
            rmax = std::max(rmax, std::abs(z - c));
        }
        return rmax / rmin;
    };
    const double r2 = roundness(1e-2), r3 = roundness(1e-3);
    CHECK(r2 > r3);
    CHECK(r3 < 1.01);
    // Asymptotic radius t |c_i p_i| (1 + O(t)).
    const double t = 1e-3;
    const bld::BuilderInput in(street(), t);
    const auto curve = bld::trace_boundary(in, 0, 128);
    const double expect = t * std::abs(in.a[0] * in.config.points[0]);
    for (cplx z : curve) {
        const double r = std::abs(z - in.config.points[0]);
        CHECK(std::abs(r - expect) < 10.0 * t * expect);
    }
}

TEST_CASE("residues of g omega are -i/t and i/t") {
    for (double t : {0.1, 0.05}) {
        const bld::BuilderInput a_in(street(), t);
        const auto [r0, rinf] = bld::residues_g_omega(a_in);
        CHECK(std::abs(r0 + iu / t) < 1e-8);
        CHECK(std::abs(rinf - iu / t) < 1e-8);
        CHECK(std::abs(r0 + rinf) < 1e-8);
    }
    const bld::BuilderInput b_in(cfg::three_lane(-1.5), 0.1);
    const auto [r0, rinf] = bld::residues_g_omega(b_in);
    CHECK(std::abs(r0 + 10.0 * iu) < 1e-8);
    CHECK(std::abs(rinf - 10.0 * iu) < 1e-8);
}

TEST_CASE("period integrals tie to the configuration forces") {
    // Balanced: all periods vanish.
    const bld::BuilderInput bal(street(), 0.05);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(bld::period_integral(bal, i)) < 1e-8);

    // Unbalanced probe: contour equals 2 pi i F_i and the total still vanishes.
    auto cfg_u = street();
    std::vector<cplx> pts = cfg_u.points;
    pts[0] += 0.1;
    const cfg::PeriodicConfiguration pert(pts, cfg_u.weights, cfg_u.c0, cfg_u.kase);
    const bld::BuilderInput unbal(pert, 0.05);
    const auto F = cfg::periodic_forces(pert);
    cplx total = 0.0;
    for (int i = 0; i < 2; ++i) {
        const cplx I = bld::period_integral(unbal, i);
        CHECK(std::abs(I - 2.0 * pi * iu * F[i]) < 1e-8);
        total += I;
    }
    CHECK(std::abs(total) < 1e-8);
}

TEST_CASE("period integrals vs forces on 50 random configurations") {
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> nn(1, 4);
    for (int rep = 0; rep < 50; ++rep) {
        const bool case_a = rep % 2 == 0;
        // Case a needs sum c = 0 with nonzero weights, hence n >= 2.
        const int n = case_a ? std::max(2, nn(rng)) : nn(rng);
        const auto c = random_periodic(rng, n, case_a);
        const bld::BuilderInput in(c, 1e-4);  // tiny t: no geometric constraint
        const auto F = cfg::periodic_forces(c);
        for (int i = 0; i < c.n(); ++i)
            CHECK(std::abs(bld::period_integral(in, i) - 2.0 * pi * iu * F[i]) <=
                  1e-8);
    }
}

TEST_CASE("built domain: circulations, velocity limits, periodicity") {
    const bld::BuilderInput in(street(), 0.05);
    const auto built = bld::build_domain(in, 64);
    REQUIRE(built.circulations.size() == 2);
    CHECK(std::abs(built.circulations[0] - 2.0 * pi * 0.05) <= 1e-8);
    CHECK(std::abs(built.circulations[1] + 2.0 * pi * 0.05) <= 1e-8);
    // Case a: both limits t conj(c0).
    CHECK(std::abs(built.v_plus - 0.05 * std::conj(cplx(0.25))) <= 1e-6);
    CHECK(std::abs(built.v_minus - 0.05 * std::conj(cplx(0.25))) <= 1e-6);
    CHECK(built.periodicity_residual <= 1e-8);
    // Boundary image centers sit within O(t) of q_i = i log p_i.
    const auto q = cfg::q_coordinates(in.config.points);
    for (int i = 0; i < 2; ++i) {
        cplx c = 0.0;
        for (cplx w : built.w_curves[i]) c += w;
        c /= double(built.w_curves[i].size());
        const cplx d = c - q[i];
        const cplx wrapped(std::remainder(d.real(), 2.0 * pi), d.imag());
        CHECK(std::abs(wrapped) < 5.0 * in.t);
    }
    // Velocity samples: v = t conj(f) with |t f| = 1 on the boundary.
    for (const auto& vs : built.velocity)
        CHECK(std::abs(std::abs(vs.v) - 1.0) <= 1e-9);
}

TEST_CASE("case-b velocity limits are opposite") {
    const bld::BuilderInput in(cfg::three_lane(-1.5), 0.05);
    const auto built = bld::build_domain(in, 64);
    // Case b: limits -+ t c0 as y -> +-infinity.
    CHECK(std::abs(built.v_plus - (-0.05) * cplx(-0.25)) <= 1e-6);
    CHECK(std::abs(built.v_minus - 0.05 * cplx(-0.25)) <= 1e-6);
    const auto rep = bld::prop_ab_check(built);
    CHECK(rep.classification == 'b');
    CHECK(rep.class_residual <= 1e-6);
}

TEST_CASE("classification of the case-a street") {
    const bld::BuilderInput in(street(), 0.05);
    const auto built = bld::build_domain(in, 64);
    const auto rep = bld::prop_ab_check(built);
    CHECK(rep.classification == 'a');
    CHECK(rep.class_residual <= 1e-6);
    CHECK(rep.flux_residual <= 1e-5);
    CHECK(rep.velocity_residual <= 1e-6);
    // Negative control: a corrupted circulation defeats both cases.
    auto bad = built;
    bad.circulations[0] *= 2.0;
    CHECK_THROWS_AS(bld::prop_ab_check(bad), bld::Unclassifiable);
}

TEST_CASE("closure defects: balanced exactly zero, unbalanced t^2 law") {
    // Balanced street: the period form has no residue, so the defect is
    // quadrature noise at every t.
    for (double t : {0.04, 0.02, 0.01}) {
        const bld::BuilderInput in(street(), t);
        for (int i = 0; i < 2; ++i) CHECK(std::abs(bld::closure_defect(in, i)) < 1e-12);
    }
    // Unbalanced probe: |defect| / t^2 -> 2 pi |F_i| (frozen reference
    // 0.2191808828 for p_1 shifted by +0.1).
    auto cfg_u = street();
    std::vector<cplx> pts = cfg_u.points;
    pts[0] += 0.1;
    const cfg::PeriodicConfiguration pert(pts, cfg_u.weights, cfg_u.c0, cfg_u.kase);
    const double target = 0.2191808828;
    for (double t : {0.02, 0.01, 0.005}) {
        const bld::BuilderInput in(pert, t);
        const double scaled = std::abs(bld::closure_defect(in, 0)) / (t * t);
        CHECK(std::abs(scaled - target) <= 0.1 * target);
    }
    // Defect sum vanishes even when unbalanced.
    const bld::BuilderInput in(pert, 0.02);
    cplx sum = 0.0;
    for (int i = 0; i < 2; ++i) sum += bld::closure_defect(in, i);
    CHECK(std::abs(sum) < 1e-10);
}

TEST_CASE("artifact conversion carries the report block") {
    const bld::BuilderInput in(street(), 0.05);
    const auto built = bld::build_domain(in, 64);
    const auto art = bld::to_artifact(built);
    CHECK(art.boundaries.size() == 2);
    CHECK(art.report.at("schema").get<int>() == 1);
    CHECK(art.report.contains("t_max"));
    CHECK(art.report.at("circulations").size() == 2);
    REQUIRE(art.periods.size() == 1);
    CHECK(std::abs(art.periods[0] - cplx(2.0 * pi)) < 1e-14);
    CHECK(!art.streamlines.empty());
}
