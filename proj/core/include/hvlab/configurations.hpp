// Finite and periodic vortex configurations: interaction forces, conservation
// identities, Newton balancing with gauge fixing, non-degeneracy ranks, and
// the closed-form example generators.
#pragma once

#include "hvlab/numeric.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace hvlab::cfg {

using num::cplx;
using num::CVec;

struct ParameterOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct CoincidentPoints : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// n >= 2 distinct points with nonzero real weights.
struct FiniteConfiguration {
    std::vector<cplx> points;
    std::vector<double> weights;

    FiniteConfiguration(std::vector<cplx> pts, std::vector<double> ws);
    int n() const { return int(points.size()); }
};

enum class PeriodicCase { a, b };

// n >= 1 distinct nonzero points, nonzero real weights, nonzero c0.
// Case (a): sum(c) = 0.  Case (b): sum(c) + 2*c0 = 0 (forces c0 real).
struct PeriodicConfiguration {
    std::vector<cplx> points;
    std::vector<double> weights;
    cplx c0;
    PeriodicCase kase;

    PeriodicConfiguration(std::vector<cplx> pts, std::vector<double> ws, cplx c0,
                          PeriodicCase kase);
    int n() const { return int(points.size()); }
};

struct ForceReport {
    std::vector<cplx> forces;
    double max_abs_force = 0.0;
    int jacobian_rank = -1;
    int expected_rank = -1;
};

// ---- forces and identities -----------------------------------------------------

// F_i = sum_{j != i} c_i c_j / (p_i - p_j)
std::vector<cplx> finite_forces(const FiniteConfiguration& cfg);

// (sum F_i,  sum p_i F_i - sum_{i<j} c_i c_j); both vanish identically.
std::pair<cplx, cplx> finite_identities(const FiniteConfiguration& cfg);

// F_i = sum_{j != i} c_i c_j (p_i+p_j)/(p_i-p_j) + {2 c_i c0 (a); 0 (b)}
std::vector<cplx> periodic_forces(const PeriodicConfiguration& cfg);

// Same forces in terms of q_j = i log p_j (p_j = exp(-i q_j)):
// F_i = i * sum_{j != i} c_i c_j cot((q_i - q_j)/2) + {2 c_i c0 (a); 0 (b)}.
std::vector<cplx> periodic_forces_q(const std::vector<cplx>& q,
                                    const std::vector<double>& weights, cplx c0,
                                    PeriodicCase kase);

// ---- balancing -------------------------------------------------------------------

// Newton-balances the configuration. Gauge: the finite case freezes the last
// two points (translation + scaling); the periodic case freezes the last
// point (common rotation/scaling leaves the forces invariant). On success
// max |F_i| <= tol. Throws num::SingularJacobian / num::NoConvergence.
FiniteConfiguration balance_solve(const FiniteConfiguration& seed,
                                  ForceReport* report = nullptr, double tol = 1e-10);
PeriodicConfiguration balance_solve(const PeriodicConfiguration& seed,
                                    ForceReport* report = nullptr, double tol = 1e-10);

// Rank of the full (ungauged) complex Jacobian dF_i/dp_j and the verdict
// rank == n-2 (finite) / n-1 (periodic). Requires max |F_i| <= 1e-8.
std::pair<int, bool> non_degenerate(const FiniteConfiguration& cfg);
std::pair<int, bool> non_degenerate(const PeriodicConfiguration& cfg);

// Re-solve while stepping the weights from cfg.weights to target (step size
// in weight space); returns the balanced configuration at target weights.
PeriodicConfiguration continue_weights(const PeriodicConfiguration& cfg,
                                       const std::vector<double>& target,
                                       double step = 0.05);

// ---- example generators (closed forms) --------------------------------------------

// Unit weights on the (n-1)-gon plus weight 1 - n/2 at the origin.
FiniteConfiguration dihedral(int n);

// n = 2, c = (1, -1), q2 = q1 + i log((2 c0 - 1)/(2 c0 + 1)), c0 != +-0.5.
PeriodicConfiguration vonkarman_street(cplx c0);

// Staggered variant: real c0 with 0 < |c0| < 0.5 (the log above is then of a
// negative ratio, giving the half-period horizontal offset).
PeriodicConfiguration staggered_street(double c0);

// n = 3 case (b): c = (1, 1, c3), p3 = 1, p1/p2 roots of
// z^2 + (2 c3/(c3+1)) z + 1;  c3 != -1 (and the roots must be distinct).
PeriodicConfiguration three_lane(double c3);

// n = 5 case (a), c = (1,1,1,-1.5,-1.5), c0 = 1.503; coordinates from the
// reference computation (numerically balanced to ~1e-8, not closed form).
PeriodicConfiguration uneven_street();

// q_j = i Log p_j (principal branch) as used for reporting positions.
std::vector<cplx> q_coordinates(const std::vector<cplx>& points);

}  // namespace hvlab::cfg
