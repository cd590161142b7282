#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hvlab/weierstrass.hpp"

#include <cmath>

using namespace hvlab;
using num::cplx;

namespace {
constexpr double pi = 3.14159265358979323846;
const cplx iu(0.0, 1.0);

std::vector<cplx> circle_path(cplx center, double r, int n = 64) {
    std::vector<cplx> pts;
    for (int k = 0; k <= n; ++k)
        pts.push_back(center + r * std::exp(2.0 * pi * iu * double(k) / double(n)));
    return pts;
}
}  // namespace

TEST_CASE("catalog: singly periodic data") {
    const auto d = wst::classical_data("scherk");
    CHECK(d.g.num.degree() == 0);  // g = 1/z
    CHECK(d.g.den.degree() == 1);
    CHECK(!d.has_branch());
    REQUIRE(d.punctures.size() == 2);
    // Poles of omega/dz: z^2 = -3 +- 2 sqrt 2; inner pair +-i(sqrt2 - 1).
    const double r_in = std::sqrt(2.0) - 1.0;
    CHECK(std::abs(std::abs(d.punctures[0].imag()) - r_in) < 1e-12);
    for (cplx p : d.punctures) CHECK(std::abs(p) < 1.0);
}

TEST_CASE("catalog: branch point locations") {
    const auto k = wst::classical_data("karcher", 0.5);
    // Q = (z^2 + a^2)(z^2 + a^-2): roots +-0.5i, +-2i.
    for (cplx r : {cplx(0, 0.5), cplx(0, -0.5), cplx(0, 2.0), cplx(0, -2.0)})
        CHECK(std::abs(k.Q.eval(r)) < 1e-12);
    CHECK(k.punctures == std::vector<cplx>{cplx(0.0)});

    const auto h = wst::classical_data("schwarzH", 0.5);
    CHECK(h.Q.degree() == 7);  // z (z^3 + a^3)(z^3 + a^-3)
    CHECK(std::abs(h.Q.eval(cplx(0.0))) < 1e-12);
    CHECK(std::abs(h.Q.eval(cplx(-0.5))) < 1e-12);   // cube root of -a^3
    CHECK(std::abs(h.Q.eval(cplx(-2.0))) < 1e-12);   // cube root of -a^-3
    CHECK(h.doubly_periodic);

    const auto p = wst::classical_data("schwarzP");
    CHECK(p.Q.degree() == 8);
    CHECK(p.doubly_periodic);
}

TEST_CASE("catalog: parameter validation") {
    CHECK_THROWS_AS(wst::classical_data("karcher"), wst::ParameterOutOfRange);
    CHECK_THROWS_AS(wst::classical_data("karcher", 1.5), wst::ParameterOutOfRange);
    CHECK_THROWS_AS(wst::classical_data("schwarzH", 0.0), wst::ParameterOutOfRange);
    CHECK_THROWS_AS(wst::classical_data("nope"), std::invalid_argument);
}

TEST_CASE("omega vanishes at the g-pole for the branched data sets") {
    // g = 1/z has its pole at 0; R(0) = 0 for the z dz / sqrt(Q) forms.
    for (const char* name : {"scherk", "schwarzP"}) {
        const auto d = wst::classical_data(name);
        CHECK(std::abs(d.R.eval(cplx(0.0))) < 1e-14);
    }
    CHECK(std::abs(wst::classical_data("schwarzH", 0.5).R.eval(cplx(0.0))) < 1e-14);
}

TEST_CASE("rational omega evaluates directly (no branch)") {
    const auto d = wst::classical_data("scherk");
    const std::vector<cplx> path{cplx(0.1), cplx(0.2, 0.1)};
    const auto vals = wst::eval_omega(d, path, cplx(1.0));
    REQUIRE(vals.size() == 2);
    auto direct = [](cplx z) { return z / ((z * z + 6.0) * z * z + 1.0); };
    CHECK(std::abs(vals[0] - direct(path[0])) < 1e-12);
    CHECK(std::abs(vals[1] - direct(path[1])) < 1e-12);
}

TEST_CASE("branch continuation: monodromy-free loop returns to start") {
    const auto d = wst::classical_data("karcher", 0.5);
    const auto loop = circle_path(cplx(0.1, 0.0), 0.05);
    const cplx q0 = d.Q.eval(loop.front());
    const cplx b0 = std::sqrt(q0);
    wst::BranchState st;
    wst::eval_omega(d, loop, b0, &st);
    CHECK(std::abs(st.value - b0) < 1e-8 * std::abs(b0));
}

TEST_CASE("branch continuation: loop around a simple root negates the branch") {
    const auto d = wst::classical_data("schwarzP");
    // Real roots of z^8 - 14 z^4 + 1: z^4 = 7 +- 4 sqrt 3 -> r = (7-4sqrt3)^{1/4}.
    const double r = std::pow(7.0 - 4.0 * std::sqrt(3.0), 0.25);
    CHECK(std::abs(d.Q.eval(cplx(r))) < 1e-10);
    const auto loop = circle_path(cplx(r), 0.05, 128);
    const cplx b0 = std::sqrt(d.Q.eval(loop.front()));
    wst::BranchState st;
    wst::eval_omega(d, loop, b0, &st);
    CHECK(std::abs(st.value + b0) < 1e-6 * std::abs(b0));
}

TEST_CASE("branch point on the path is rejected") {
    const auto d = wst::classical_data("schwarzP");
    const double r = std::pow(7.0 - 4.0 * std::sqrt(3.0), 0.25);
    const std::vector<cplx> path{cplx(r - 0.05), cplx(r + 0.05)};
    CHECK_THROWS_AS(wst::eval_omega(d, path, cplx(1.0)), wst::BranchPointOnPath);
}

TEST_CASE("immersion: zero-length path returns the base point") {
    const auto d = wst::classical_data("scherk");
    const std::array<double, 3> X0{1.0, -2.0, 0.5};
    const auto s = wst::immersion(d, X0, {cplx(0.3), cplx(0.3)}, cplx(1.0));
    CHECK(s.X[0] == doctest::Approx(1.0));
    CHECK(s.X[1] == doctest::Approx(-2.0));
    CHECK(s.X[2] == doctest::Approx(0.5));
}

TEST_CASE("immersion: puncture loop has zero height period") {
    const auto d = wst::classical_data("scherk");
    const cplx pole = iu * (std::sqrt(2.0) - 1.0);
    const auto loop = circle_path(pole, 0.1, 256);
    const auto s = wst::immersion(d, {0.0, 0.0, 0.0}, loop, cplx(1.0));
    // x3 residue of omega at the puncture is 1/(8 sqrt 2), real, so the x3
    // increment Re(2 pi i Res) vanishes; the horizontal period does not.
    CHECK(std::abs(s.X[2]) < 1e-8);
    CHECK(std::hypot(s.X[0], s.X[1]) > 0.1);
}

TEST_CASE("immersion is path independent in a puncture-free disk") {
    const auto d = wst::classical_data("scherk");
    const cplx a(0.1, -0.1), b(0.35, 0.2);
    const auto s1 = wst::immersion(d, {0, 0, 0}, {a, b}, cplx(1.0));
    const auto s2 =
        wst::immersion(d, {0, 0, 0}, {a, cplx(0.4, -0.2), cplx(0.5, 0.15), b},
                       cplx(1.0));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(s1.X[k] - s2.X[k]) < 2e-10);
}

TEST_CASE("coordinates are harmonic (mean value property)") {
    const auto d = wst::classical_data("scherk");
    const cplx z0(0.25, 0.1);
    const double r = 1e-2;
    std::array<double, 3> mean{};
    const int n = 32;
    for (int k = 0; k < n; ++k) {
        const cplx zk = z0 + r * std::exp(2.0 * pi * iu * double(k) / double(n));
        const auto s = wst::immersion(d, {0, 0, 0}, {cplx(0.0), zk}, cplx(1.0));
        for (int j = 0; j < 3; ++j) mean[j] += s.X[j] / n;
    }
    const auto c = wst::immersion(d, {0, 0, 0}, {cplx(0.0), z0}, cplx(1.0));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(mean[j] - c.X[j]) <= 1e-6);
}

TEST_CASE("unit normal from g") {
    const auto n1 = wst::gauss_map(cplx(1.0));
    CHECK(n1[0] == doctest::Approx(1.0));
    CHECK(std::abs(n1[2]) < 1e-15);  // horizontal when |g| = 1
    const auto n2 = wst::gauss_map(cplx(2.0));
    CHECK(n2[0] == doctest::Approx(0.8));
    CHECK(n2[1] == doctest::Approx(0.0));
    CHECK(n2[2] == doctest::Approx(0.6));
    const auto n3 = wst::gauss_map(cplx(1e200));
    CHECK(n3[2] == doctest::Approx(1.0));
    for (cplx g : {cplx(0.3, -0.7), cplx(-5.0, 2.0)}) {
        const auto n = wst::gauss_map(g);
        CHECK(std::abs(n[0] * n[0] + n[1] * n[1] + n[2] * n[2] - 1.0) < 1e-12);
        CHECK(((std::abs(g) > 1.0) == (n[2] > 0.0)));
    }
}

TEST_CASE("normal agrees with finite-difference tangent cross product") {
    const auto d = wst::classical_data("scherk");
    const cplx z0(0.3, 0.15);
    const double h = 1e-5;
    auto X = [&](cplx z) {
        return wst::immersion(d, {0, 0, 0}, {cplx(0.0), z}, cplx(1.0)).X;
    };
    const auto xp = X(z0 + h), xm = X(z0 - h), yp = X(z0 + iu * h), ym = X(z0 - iu * h);
    std::array<double, 3> tu{}, tv{}, nfd{};
    for (int j = 0; j < 3; ++j) {
        tu[j] = (xp[j] - xm[j]) / (2 * h);
        tv[j] = (yp[j] - ym[j]) / (2 * h);
    }
    nfd = {tu[1] * tv[2] - tu[2] * tv[1], tu[2] * tv[0] - tu[0] * tv[2],
           tu[0] * tv[1] - tu[1] * tv[0]};
    const double nn = std::sqrt(nfd[0] * nfd[0] + nfd[1] * nfd[1] + nfd[2] * nfd[2]);
    const auto s = wst::immersion(d, {0, 0, 0}, {cplx(0.0), z0}, cplx(1.0));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(nfd[j] / nn - s.N[j]) < 1e-4);
}

TEST_CASE("metric factor is positive and matches the closed form") {
    const auto d = wst::classical_data("scherk");
    const cplx z0(0.2, -0.3);
    const auto s = wst::immersion(d, {0, 0, 0}, {cplx(0.0), z0}, cplx(1.0));
    const cplx g = d.g.eval(z0);
    const cplx om = d.R.eval(z0);
    const double expected = 0.5 * (std::abs(g) + 1.0 / std::abs(g)) * std::abs(om);
    CHECK(s.ds_factor == doctest::Approx(expected));
    CHECK(s.ds_factor > 0.0);
}

TEST_CASE("domain image: boundary closure, speed, and period") {
    const auto art = wst::domain_image(wst::classical_data("scherk"), 160);
    REQUIRE(!art.boundaries.empty());
    double max_len = 0.0;
    for (const auto& b : art.boundaries) {
        // Polylines omit the duplicate closing vertex; the closure defect of
        // the full loop integral is measured in the report.
        REQUIRE(b.polyline.size() > 8);
        double len = 0.0;
        for (std::size_t k = 0; k + 1 < b.polyline.size(); ++k)
            len += std::abs(b.polyline[k + 1] - b.polyline[k]);
        max_len = std::max(max_len, len);
    }
    CHECK(art.report.at("boundary_closure_gap").get<double>() <= 1e-6 * max_len);
    for (const auto& vs : art.velocity) CHECK(std::abs(std::abs(vs.v) - 1.0) <= 1e-6);
    REQUIRE(art.periods.size() == 1);
    CHECK(art.report.at("boundary_velocity_residual").get<double>() <= 1e-6);
    CHECK(art.report.at("boundary_u_deviation").get<double>() <= 1e-6);
    CHECK(!art.streamlines.empty());
}

TEST_CASE("domain image: branched data produce two boundary lifts") {
    const auto art = wst::domain_image(wst::classical_data("karcher", 0.5), 120);
    CHECK(art.boundaries.size() == 2);
    CHECK(art.periods.size() == 1);
    const auto art_p = wst::domain_image(wst::classical_data("schwarzP"), 120);
    CHECK(art_p.boundaries.size() == 2);
    CHECK(art_p.periods.size() == 2);  // doubly periodic
    for (const auto& vs : art_p.velocity)
        CHECK(std::abs(std::abs(vs.v) - 1.0) <= 1e-6);
}
