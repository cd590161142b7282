// Numerical primitives: adaptive complex contour integration, Newton solvers
// for complex systems, finite-difference Jacobians and SVD-based rank.
#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hvlab::num {

using cplx = std::complex<double>;

// ---- errors ---------------------------------------------------------------

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MaxDepthExceeded : QuadratureError {
    using QuadratureError::QuadratureError;
};
struct NonFiniteSample : QuadratureError {
    using QuadratureError::QuadratureError;
};
struct SingularJacobian : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- contour integration ---------------------------------------------------

struct QuadratureSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 40;  // subdivision depth per path piece
};

// Oriented integration path: either a polyline (open or closed) or a circle.
struct ContourPath {
    enum class Kind { polyline, circle };

    Kind kind = Kind::polyline;
    std::vector<cplx> vertices;  // polyline: >= 2 points
    cplx center{};               // circle
    double radius = 0.0;
    bool counterclockwise = true;
    bool closed = false;

    static ContourPath segment(cplx a, cplx b);
    static ContourPath polyline(std::vector<cplx> pts, bool closed = false);
    static ContourPath circle(cplx center, double radius, bool ccw = true);

    // Total polygonal length (2*pi*r for circles).
    double length() const;
};

// Integral of f along the path, adaptive composite Gauss-Legendre (12 nodes
// per panel, interval halving). Estimated error <= max(abs_tol, rel_tol*|I|).
cplx integrate_contour(const std::function<cplx(cplx)>& f,
                       const ContourPath& path,
                       const QuadratureSettings& q = {});

// Integral of h(s) ds over [a,b]; the scalar backend of integrate_contour,
// exposed for parametrized integrands (e.g. non-holomorphic forms).
cplx integrate_param(const std::function<cplx(double)>& h, double a, double b,
                     const QuadratureSettings& q = {});

// ---- Newton solver ----------------------------------------------------------

using CVec = std::vector<cplx>;

struct NewtonOptions {
    double tol = 1e-10;        // on max_i |residual_i|
    int max_iter = 60;
    double fd_step = 1e-6;     // relative FD step for the Jacobian
    double cond_limit = 1e14;  // condition number beyond which we give up
};

struct NewtonReport {
    bool converged = false;
    int iterations = 0;
    double residual_norm = 0.0;  // final max_i |r_i|
};

// Solves residual(x) = 0 for k complex unknowns. The map need not be
// holomorphic: internally the system is treated as 2k real unknowns with a
// central-difference Jacobian. Throws SingularJacobian / NoConvergence.
CVec newton_solve(const std::function<CVec(const CVec&)>& residual, CVec x0,
                  const NewtonOptions& opt = {}, NewtonReport* report = nullptr);

// ---- matrices, Jacobians, rank ----------------------------------------------

struct ComplexMatrix {
    int rows = 0, cols = 0;
    std::vector<cplx> entries;  // row-major, rows*cols

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), entries(std::size_t(r) * c) {}
    cplx& at(int i, int j) { return entries[std::size_t(i) * cols + j]; }
    const cplx& at(int i, int j) const { return entries[std::size_t(i) * cols + j]; }
    ComplexMatrix adjoint() const;
};

struct JacobianResult {
    ComplexMatrix matrix;
    std::string method;  // e.g. "central-difference (complex step h real)"
};

// d(map_i)/d(x_j) by central differences with a real step (exact convention
// for holomorphic maps; callers with non-holomorphic maps should use
// newton_solve's internal real treatment instead).
JacobianResult jacobian_fd(const std::function<CVec(const CVec&)>& map,
                           const CVec& x, double step);

// Number of singular values > tol * sigma_max.
int complex_rank(const ComplexMatrix& m, double tol = 1e-8);

}  // namespace hvlab::num
