// Weierstrass data (g, omega): rational-function representation, square-root
// branch tracking along paths, the immersion X and Gauss map, the catalog of
// classical singly/doubly periodic examples, and the planar domain image
// (boundary lifts, stream function grid, streamlines).
#pragma once

#include "hvlab/io.hpp"
#include "hvlab/numeric.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hvlab::wst {

using num::cplx;

struct BranchPointOnPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoleOnPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParameterOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---- rational functions -----------------------------------------------------------

// Coefficients in increasing degree; trailing zeros trimmed.
struct Polynomial {
    std::vector<cplx> coeffs{cplx(0.0)};

    Polynomial() = default;
    Polynomial(std::initializer_list<cplx> c) : coeffs(c) { trim(); }
    explicit Polynomial(std::vector<cplx> c) : coeffs(std::move(c)) { trim(); }

    int degree() const { return int(coeffs.size()) - 1; }
    cplx eval(cplx z) const;
    Polynomial derivative() const;
    bool is_one() const { return coeffs.size() == 1 && coeffs[0] == cplx(1.0); }

  private:
    void trim();
};

// Normalized so the denominator's leading coefficient is 1.
struct RationalFunction {
    Polynomial num;
    Polynomial den{Polynomial{cplx(1.0)}};

    RationalFunction() = default;
    RationalFunction(Polynomial n, Polynomial d);
    cplx eval(cplx z) const;
};

// ---- Weierstrass data ---------------------------------------------------------------

// g meromorphic rational; omega = R(z) dz / sqrt(Q(z)) with Q = 1 allowed.
struct WeierstrassData {
    std::string name;
    RationalFunction g;
    RationalFunction R;
    Polynomial Q{Polynomial{cplx(1.0)}};
    std::vector<cplx> punctures;      // excluded points of the unit-disk domain
    std::vector<cplx> branch_points;  // roots of Q inside the domain
    std::string domain_hint;          // e.g. "unit disk minus punctures"
    bool doubly_periodic = false;

    bool has_branch() const { return !Q.is_one(); }
};

// Continuously tracked determination of sqrt(Q) along a path.
struct BranchState {
    cplx value{1.0};       // current sqrt(Q(z)) determination
    std::size_t steps = 0;

    // Advances to the sample with Q-value q: picks the square root closer to
    // the previous value. Throws BranchPointOnPath when |q| ~ 0.
    void advance(cplx q);
};

struct ImmersionSample {
    cplx z;
    std::array<double, 3> X{};
    std::array<double, 3> N{};
    double ds_factor = 0.0;  // (|g| + 1/|g|)/2 * |omega/dz|
};

// ---- operations -----------------------------------------------------------------------

// omega/dz at each path sample with the sqrt branch continued from branch0.
// Samples are refined internally until successive branch values differ by
// less than 20% in angle; outputs correspond to the *input* samples.
// `final_state` (optional) receives the branch at the last sample.
std::vector<cplx> eval_omega(const WeierstrassData& data, const std::vector<cplx>& path,
                             cplx branch0, BranchState* final_state = nullptr);

// Integral of h(z) * omega along the polyline with branch continuation
// (h = 1 gives ∫omega, h = g gives ∫ g omega). Trapezoid on refined samples.
cplx integrate_form(const WeierstrassData& data, const std::vector<cplx>& path,
                    cplx branch0, const std::function<cplx(cplx)>& h,
                    BranchState* final_state = nullptr);

// X(z) = X0 + Re ∫ ( (g^{-1}-g)/2 * omega, i(g^{-1}+g)/2 * omega, omega )
// along the path (path.front() = base point); X[2] is the stream function.
ImmersionSample immersion(const WeierstrassData& data, const std::array<double, 3>& X0,
                          const std::vector<cplx>& path, cplx branch0);

// N = (2 Re g, 2 Im g, |g|^2 - 1) / (|g|^2 + 1); the g -> infinity limit is
// (0, 0, 1).
std::array<double, 3> gauss_map(cplx g_value);

// Catalog: scherk | karcher | schwarzP | schwarzH; karcher/schwarzH take the
// shape parameter 0 < a < 1.
WeierstrassData classical_data(const std::string& name,
                               std::optional<double> a = std::nullopt);

// Planar domain image of the unit-disk (double cover when Q != 1):
// boundary lifts of |z| = 1 mapped through phi = -∫ g omega, the stream
// function u = Re ∫ omega on a polar grid, marching-squares streamlines,
// translation periods, and |velocity| diagnostics.
io::DomainArtifact domain_image(const WeierstrassData& data, int grid = 400,
                                int streamline_levels = 15);

}  // namespace hvlab::wst
