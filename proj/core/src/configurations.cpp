#include "hvlab/configurations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hvlab::cfg {

namespace {

constexpr double kSumTol = 1e-12;

void check_distinct(const std::vector<cplx>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double scale = std::max({1.0, std::abs(pts[i]), std::abs(pts[j])});
            if (std::abs(pts[i] - pts[j]) <= 1e-12 * scale)
                throw CoincidentPoints("configuration points must be pairwise distinct");
        }
}

void check_weights(const std::vector<double>& ws) {
    for (double w : ws)
        if (w == 0.0 || !std::isfinite(w))
            throw ParameterOutOfRange("weights must be nonzero finite reals");
}

}  // namespace

FiniteConfiguration::FiniteConfiguration(std::vector<cplx> pts, std::vector<double> ws)
    : points(std::move(pts)), weights(std::move(ws)) {
    if (points.size() < 2) throw ParameterOutOfRange("finite configuration needs n >= 2");
    if (points.size() != weights.size())
        throw ParameterOutOfRange("points/weights size mismatch");
    check_distinct(points);
    check_weights(weights);
}

PeriodicConfiguration::PeriodicConfiguration(std::vector<cplx> pts,
                                             std::vector<double> ws, cplx c0_,
                                             PeriodicCase kase_)
    : points(std::move(pts)), weights(std::move(ws)), c0(c0_), kase(kase_) {
    if (points.empty()) throw ParameterOutOfRange("periodic configuration needs n >= 1");
    if (points.size() != weights.size())
        throw ParameterOutOfRange("points/weights size mismatch");
    for (const cplx& p : points)
        if (std::abs(p) <= 1e-300)
            throw ParameterOutOfRange("periodic configuration points must be nonzero");
    check_distinct(points);
    check_weights(weights);
    if (std::abs(c0) == 0.0) throw ParameterOutOfRange("c0 must be nonzero");
    double csum = 0.0;
    for (double w : weights) csum += w;
    if (kase == PeriodicCase::a) {
        if (std::abs(csum) > kSumTol)
            throw ParameterOutOfRange("case (a) requires sum of weights = 0");
    } else {
        if (std::abs(c0.imag()) > kSumTol)
            throw ParameterOutOfRange("case (b) requires real c0");
        if (std::abs(csum + 2.0 * c0.real()) > kSumTol)
            throw ParameterOutOfRange("case (b) requires sum of weights + 2 c0 = 0");
    }
}

// ---- forces --------------------------------------------------------------------

std::vector<cplx> finite_forces(const FiniteConfiguration& cfg) {
    const int n = cfg.n();
    std::vector<cplx> F(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            F[i] += cfg.weights[i] * cfg.weights[j] / (cfg.points[i] - cfg.points[j]);
        }
    return F;
}

std::pair<cplx, cplx> finite_identities(const FiniteConfiguration& cfg) {
    const auto F = finite_forces(cfg);
    cplx sumF = 0.0, sumPF = 0.0;
    for (int i = 0; i < cfg.n(); ++i) {
        sumF += F[i];
        sumPF += cfg.points[i] * F[i];
    }
    double pairSum = 0.0;
    for (int i = 0; i < cfg.n(); ++i)
        for (int j = i + 1; j < cfg.n(); ++j) pairSum += cfg.weights[i] * cfg.weights[j];
    return {sumF, sumPF - pairSum};
}

namespace {

std::vector<cplx> periodic_forces_raw(const std::vector<cplx>& p,
                                      const std::vector<double>& c, cplx c0,
                                      PeriodicCase kase) {
    const int n = int(p.size());
    std::vector<cplx> F(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            F[i] += c[i] * c[j] * (p[i] + p[j]) / (p[i] - p[j]);
        }
        if (kase == PeriodicCase::a) F[i] += 2.0 * c[i] * c0;
    }
    return F;
}

}  // namespace

std::vector<cplx> periodic_forces(const PeriodicConfiguration& cfg) {
    return periodic_forces_raw(cfg.points, cfg.weights, cfg.c0, cfg.kase);
}

std::vector<cplx> periodic_forces_q(const std::vector<cplx>& q,
                                    const std::vector<double>& weights, cplx c0,
                                    PeriodicCase kase) {
    const int n = int(q.size());
    if (int(weights.size()) != n) throw ParameterOutOfRange("q/weights size mismatch");
    std::vector<cplx> F(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const cplx h = 0.5 * (q[i] - q[j]);
            const cplx s = std::sin(h);
            if (std::abs(s) < 1e-12)
                throw CoincidentPoints("q_i - q_j is a multiple of 2*pi");
            F[i] += cplx(0.0, 1.0) * weights[i] * weights[j] * std::cos(h) / s;
        }
        if (kase == PeriodicCase::a) F[i] += 2.0 * weights[i] * c0;
    }
    return F;
}

// ---- balancing -----------------------------------------------------------------

namespace {

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const cplx& x : v) m = std::max(m, std::abs(x));
    return m;
}

template <class Cfg>
ForceReport make_report(const Cfg& cfg, const std::vector<cplx>& F, int expected) {
    ForceReport rep;
    rep.forces = F;
    rep.max_abs_force = max_abs(F);
    rep.expected_rank = expected;
    rep.jacobian_rank = non_degenerate(cfg).first;
    return rep;
}

}  // namespace

FiniteConfiguration balance_solve(const FiniteConfiguration& seed, ForceReport* report,
                                  double tol) {
    const int n = seed.n();
    {
        double pairSum = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) pairSum += seed.weights[i] * seed.weights[j];
        if (std::abs(pairSum) > 1e-8)
            throw ParameterOutOfRange(
                "weights violate the pair-sum restriction: no balanced configuration exists");
    }
    auto forces_at = [&](const std::vector<cplx>& pts) {
        return finite_forces(FiniteConfiguration(pts, seed.weights));
    };

    std::vector<cplx> pts = seed.points;
    if (max_abs(forces_at(pts)) > tol && n > 2) {
        // Unknowns p_1..p_{n-2}; residuals F_1..F_{n-2}; p_{n-1}, p_n frozen.
        CVec x0(pts.begin(), pts.begin() + (n - 2));
        auto residual = [&](const CVec& x) {
            std::vector<cplx> p = pts;
            std::copy(x.begin(), x.end(), p.begin());
            auto F = forces_at(p);
            return CVec(F.begin(), F.begin() + (n - 2));
        };
        num::NewtonOptions opt;
        opt.tol = tol;
        const CVec sol = num::newton_solve(residual, x0, opt);
        std::copy(sol.begin(), sol.end(), pts.begin());
    }
    FiniteConfiguration out(pts, seed.weights);
    const auto F = finite_forces(out);
    if (max_abs(F) > tol) throw num::NoConvergence("finite balance not reached");
    if (report) *report = make_report(out, F, n - 2);
    return out;
}

PeriodicConfiguration balance_solve(const PeriodicConfiguration& seed,
                                    ForceReport* report, double tol) {
    const int n = seed.n();
    auto forces_at = [&](const std::vector<cplx>& pts) {
        return periodic_forces_raw(pts, seed.weights, seed.c0, seed.kase);
    };

    std::vector<cplx> pts = seed.points;
    if (max_abs(forces_at(pts)) > tol && n > 1) {
        // Unknowns p_1..p_{n-1}; residuals F_1..F_{n-1}; p_n frozen.
        CVec x0(pts.begin(), pts.begin() + (n - 1));
        auto residual = [&](const CVec& x) {
            std::vector<cplx> p = pts;
            std::copy(x.begin(), x.end(), p.begin());
            auto F = forces_at(p);
            return CVec(F.begin(), F.begin() + (n - 1));
        };
        num::NewtonOptions opt;
        opt.tol = tol;
        const CVec sol = num::newton_solve(residual, x0, opt);
        std::copy(sol.begin(), sol.end(), pts.begin());
    }
    PeriodicConfiguration out(pts, seed.weights, seed.c0, seed.kase);
    const auto F = periodic_forces(out);
    if (max_abs(F) > tol) throw num::NoConvergence("periodic balance not reached");
    if (report) *report = make_report(out, F, n - 1);
    return out;
}

// ---- non-degeneracy ---------------------------------------------------------------

namespace {

template <class ForcesAt>
std::pair<int, bool> rank_verdict(const std::vector<cplx>& pts, ForcesAt&& forces_at,
                                  double max_force, int expected) {
    if (max_force > 1e-8)
        throw std::invalid_argument("non_degenerate requires an (almost) balanced input");
    auto map = [&](const CVec& x) {
        auto F = forces_at(std::vector<cplx>(x.begin(), x.end()));
        return CVec(F.begin(), F.end());
    };
    const auto jac = num::jacobian_fd(map, CVec(pts.begin(), pts.end()), 1e-6);
    const int rank = num::complex_rank(jac.matrix, 1e-8);
    return {rank, rank == expected};
}

}  // namespace

std::pair<int, bool> non_degenerate(const FiniteConfiguration& cfg) {
    auto forces_at = [&](const std::vector<cplx>& p) {
        return finite_forces(FiniteConfiguration(p, cfg.weights));
    };
    return rank_verdict(cfg.points, forces_at, max_abs(finite_forces(cfg)), cfg.n() - 2);
}

std::pair<int, bool> non_degenerate(const PeriodicConfiguration& cfg) {
    auto forces_at = [&](const std::vector<cplx>& p) {
        return periodic_forces_raw(p, cfg.weights, cfg.c0, cfg.kase);
    };
    return rank_verdict(cfg.points, forces_at, max_abs(periodic_forces(cfg)), cfg.n() - 1);
}

PeriodicConfiguration continue_weights(const PeriodicConfiguration& cfg,
                                       const std::vector<double>& target, double step) {
    if (target.size() != cfg.weights.size())
        throw ParameterOutOfRange("continue_weights: size mismatch");
    double dist = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i)
        dist = std::max(dist, std::abs(target[i] - cfg.weights[i]));
    const int steps = std::max(1, int(std::ceil(dist / step)));

    PeriodicConfiguration cur = cfg;
    for (int s = 1; s <= steps; ++s) {
        const double a = double(s) / steps;
        std::vector<double> w(target.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = (1.0 - a) * cfg.weights[i] + a * target[i];
        cplx c0 = cur.c0;
        if (cfg.kase == PeriodicCase::b) {
            double csum = 0.0;
            for (double wi : w) csum += wi;
            c0 = -csum / 2.0;
        }
        cur = balance_solve(PeriodicConfiguration(cur.points, w, c0, cfg.kase));
    }
    return cur;
}

// ---- generators -----------------------------------------------------------------

FiniteConfiguration dihedral(int n) {
    if (n < 3) throw ParameterOutOfRange("dihedral requires n >= 3");
    std::vector<cplx> pts;
    std::vector<double> ws;
    for (int j = 1; j <= n - 1; ++j) {
        pts.push_back(std::exp(cplx(0.0, 2.0 * std::numbers::pi * j / (n - 1))));
        ws.push_back(1.0);
    }
    pts.push_back(0.0);
    ws.push_back(1.0 - n / 2.0);
    return FiniteConfiguration(pts, ws);
}

PeriodicConfiguration vonkarman_street(cplx c0) {
    if (std::abs(c0 - 0.5) < 1e-12 || std::abs(c0 + 0.5) < 1e-12)
        throw ParameterOutOfRange("vonkarman_street requires c0 != +-0.5");
    const cplx p2 = (2.0 * c0 - 1.0) / (2.0 * c0 + 1.0);
    return PeriodicConfiguration({cplx(1.0), p2}, {1.0, -1.0}, c0, PeriodicCase::a);
}

PeriodicConfiguration staggered_street(double c0) {
    if (!(std::abs(c0) > 0.0 && std::abs(c0) < 0.5))
        throw ParameterOutOfRange("staggered_street requires real c0 with 0 < |c0| < 0.5");
    return vonkarman_street(cplx(c0, 0.0));
}

PeriodicConfiguration three_lane(double c3) {
    if (c3 == -1.0) throw ParameterOutOfRange("three_lane requires c3 != -1");
    if (c3 == 0.0 || c3 == -2.0)
        throw ParameterOutOfRange("three_lane: weight/c0 would vanish");
    const cplx b = 2.0 * c3 / (c3 + 1.0);
    const cplx disc = std::sqrt(b * b - 4.0);
    const cplx p1 = (-b + disc) / 2.0;
    const cplx p2 = (-b - disc) / 2.0;
    const double c0 = -(2.0 + c3) / 2.0;
    return PeriodicConfiguration({p1, p2, cplx(1.0)}, {1.0, 1.0, c3}, c0,
                                 PeriodicCase::b);
}

PeriodicConfiguration uneven_street() {
    // Positions q/pi of one fundamental period (reference computation output).
    const double pi = std::numbers::pi;
    const cplx qs[5] = {
        pi * cplx(-0.6666666664, -0.02936340626),
        pi * cplx(-0.03551828126, 0.01468170323),
        pi * cplx(0.7021849478, 0.01468170323),
        pi * cplx(-0.1846663713, -0.5251421936),
        pi * cplx(0.8513330378, -0.5251421936),
    };
    std::vector<cplx> pts;
    for (const cplx& q : qs) pts.push_back(std::exp(cplx(0.0, -1.0) * q));
    // c0 = 1.503 reproduces the reference coordinates exactly (they solve the
    // balance equations to ~1e-15 with this value).
    return PeriodicConfiguration(pts, {1.0, 1.0, 1.0, -1.5, -1.5}, 1.503,
                                 PeriodicCase::a);
}

std::vector<cplx> q_coordinates(const std::vector<cplx>& points) {
    std::vector<cplx> q;
    q.reserve(points.size());
    for (const cplx& p : points) q.push_back(cplx(0.0, 1.0) * std::log(p));
    return q;
}

}  // namespace hvlab::cfg
