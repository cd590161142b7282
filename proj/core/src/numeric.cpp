#include "hvlab/numeric.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <numbers>

namespace hvlab::num {

// ---- ContourPath -------------------------------------------------------------

ContourPath ContourPath::segment(cplx a, cplx b) {
    ContourPath p;
    p.kind = Kind::polyline;
    p.vertices = {a, b};
    p.closed = false;
    return p;
}

ContourPath ContourPath::polyline(std::vector<cplx> pts, bool closed) {
    if (pts.size() < 2) throw std::invalid_argument("polyline needs >= 2 vertices");
    ContourPath p;
    p.kind = Kind::polyline;
    p.vertices = std::move(pts);
    p.closed = closed;
    return p;
}

ContourPath ContourPath::circle(cplx center, double radius, bool ccw) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be > 0");
    ContourPath p;
    p.kind = Kind::circle;
    p.center = center;
    p.radius = radius;
    p.counterclockwise = ccw;
    p.closed = true;
    return p;
}

double ContourPath::length() const {
    if (kind == Kind::circle) return 2.0 * std::numbers::pi * radius;
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
        len += std::abs(vertices[i + 1] - vertices[i]);
    if (closed && vertices.size() > 1) len += std::abs(vertices.front() - vertices.back());
    return len;
}

// ---- Gauss-Legendre ----------------------------------------------------------

namespace {

constexpr int kGLOrder = 12;

struct GLRule {
    std::array<double, kGLOrder> x{};  // nodes on [-1, 1]
    std::array<double, kGLOrder> w{};
};

// Classic gauleg: Newton iteration on Legendre polynomial roots.
GLRule make_gl_rule() {
    GLRule r;
    const int n = kGLOrder;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

const GLRule& gl_rule() {
    static const GLRule rule = make_gl_rule();
    return rule;
}

cplx gl_panel(const std::function<cplx(double)>& h, double a, double b) {
    const GLRule& r = gl_rule();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx acc = 0.0;
    for (int i = 0; i < kGLOrder; ++i) {
        cplx v = h(mid + half * r.x[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NonFiniteSample("integrand returned a non-finite value");
        acc += r.w[i] * v;
    }
    return half * acc;
}

cplx adapt(const std::function<cplx(double)>& h, double a, double b, cplx whole,
           double tol, int depth, int max_depth) {
    const double mid = 0.5 * (a + b);
    const cplx left = gl_panel(h, a, mid);
    const cplx right = gl_panel(h, mid, b);
    const cplx sum = left + right;
    if (std::abs(sum - whole) <= tol) return sum;
    if (depth >= max_depth)
        throw MaxDepthExceeded("adaptive quadrature: max subdivision depth reached");
    const double half_tol = tol / std::numbers::sqrt2;
    return adapt(h, a, mid, left, half_tol, depth + 1, max_depth) +
           adapt(h, mid, b, right, half_tol, depth + 1, max_depth);
}

}  // namespace

cplx integrate_param(const std::function<cplx(double)>& h, double a, double b,
                     const QuadratureSettings& q) {
    if (a == b) return 0.0;
    const cplx whole = gl_panel(h, a, b);
    const double tol = std::max(q.abs_tol, q.rel_tol * std::abs(whole));
    return adapt(h, a, b, whole, tol, 0, q.max_depth);
}

cplx integrate_contour(const std::function<cplx(cplx)>& f, const ContourPath& path,
                       const QuadratureSettings& q) {
    if (path.kind == ContourPath::Kind::circle) {
        const double sgn = path.counterclockwise ? 1.0 : -1.0;
        auto h = [&](double th) {
            const cplx z = path.center + path.radius * std::exp(cplx(0.0, sgn * th));
            const cplx dz = cplx(0.0, sgn) * path.radius * std::exp(cplx(0.0, sgn * th));
            return f(z) * dz;
        };
        // Integrate per quadrant: keeps the first panel representative.
        cplx total = 0.0;
        for (int k = 0; k < 4; ++k)
            total += integrate_param(h, k * std::numbers::pi / 2.0,
                                     (k + 1) * std::numbers::pi / 2.0, q);
        return total;
    }
    const auto& v = path.vertices;
    if (v.size() < 2) throw std::invalid_argument("polyline needs >= 2 vertices");
    cplx total = 0.0;
    auto add_seg = [&](cplx a, cplx b) {
        if (a == b) return;
        const cplx d = b - a;
        total += integrate_param([&](double s) { return f(a + s * d) * d; }, 0.0, 1.0, q);
    };
    for (std::size_t i = 0; i + 1 < v.size(); ++i) add_seg(v[i], v[i + 1]);
    if (path.closed) add_seg(v.back(), v.front());
    return total;
}

// ---- Newton solver -----------------------------------------------------------

namespace {

Eigen::VectorXd to_real(const CVec& x) {
    Eigen::VectorXd r(2 * x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        r[2 * i] = x[i].real();
        r[2 * i + 1] = x[i].imag();
    }
    return r;
}

CVec to_complex(const Eigen::VectorXd& r) {
    CVec x(r.size() / 2);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = cplx(r[2 * i], r[2 * i + 1]);
    return x;
}

double inf_norm(const CVec& r) {
    double m = 0.0;
    for (const cplx& v : r) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

CVec newton_solve(const std::function<CVec(const CVec&)>& residual, CVec x0,
                  const NewtonOptions& opt, NewtonReport* report) {
    const int k = int(x0.size());
    Eigen::VectorXd x = to_real(x0);
    CVec r = residual(x0);
    if (int(r.size()) != k) throw std::invalid_argument("residual dimension mismatch");
    double rnorm = inf_norm(r);

    NewtonReport rep;
    for (int iter = 0; iter < opt.max_iter && rnorm > opt.tol; ++iter) {
        // Real 2k x 2k central-difference Jacobian (valid for any smooth map).
        Eigen::MatrixXd J(2 * k, 2 * k);
        for (int j = 0; j < 2 * k; ++j) {
            const double h = opt.fd_step * std::max(1.0, std::abs(x[j]));
            Eigen::VectorXd xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            const CVec rp = residual(to_complex(xp));
            const CVec rm = residual(to_complex(xm));
            for (int i = 0; i < k; ++i) {
                const cplx d = (rp[i] - rm[i]) / (2.0 * h);
                if (!std::isfinite(d.real()) || !std::isfinite(d.imag()))
                    throw NonFiniteSample("Jacobian sample is non-finite");
                J(2 * i, j) = d.real();
                J(2 * i + 1, j) = d.imag();
            }
        }

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        if (sv[sv.size() - 1] <= 0.0 || sv[0] / sv[sv.size() - 1] > opt.cond_limit)
            throw SingularJacobian("Newton Jacobian is singular or ill-conditioned");

        Eigen::VectorXd rv(2 * k);
        for (int i = 0; i < k; ++i) {
            rv[2 * i] = r[i].real();
            rv[2 * i + 1] = r[i].imag();
        }
        const Eigen::VectorXd step = svd.solve(rv);

        // Damped update: halve the step until the residual does not increase.
        double lambda = 1.0;
        Eigen::VectorXd xn;
        CVec rn;
        double rn_norm = rnorm;
        for (int ls = 0; ls < 10; ++ls) {
            xn = x - lambda * step;
            rn = residual(to_complex(xn));
            rn_norm = inf_norm(rn);
            if (rn_norm < rnorm || rn_norm <= opt.tol) break;
            lambda *= 0.5;
        }
        x = xn;
        r = rn;
        rnorm = rn_norm;
        rep.iterations = iter + 1;
    }

    rep.converged = rnorm <= opt.tol;
    rep.residual_norm = rnorm;
    if (report) *report = rep;
    if (!rep.converged) throw NoConvergence("Newton did not reach tolerance");
    return to_complex(x);
}

// ---- Jacobians and rank --------------------------------------------------------

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix a(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a.at(j, i) = std::conj(at(i, j));
    return a;
}

JacobianResult jacobian_fd(const std::function<CVec(const CVec&)>& map, const CVec& x,
                           double step) {
    if (!(step > 0.0)) throw std::invalid_argument("FD step must be > 0");
    const int k = int(x.size());
    const CVec f0 = map(x);
    const int m = int(f0.size());
    JacobianResult out;
    out.matrix = ComplexMatrix(m, k);
    out.method = "central-difference, real step (holomorphic convention)";
    for (int j = 0; j < k; ++j) {
        const double h = step * std::max(1.0, std::abs(x[j]));
        CVec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const CVec fp = map(xp);
        const CVec fm = map(xm);
        for (int i = 0; i < m; ++i) {
            const cplx d = (fp[i] - fm[i]) / (2.0 * h);
            if (!std::isfinite(d.real()) || !std::isfinite(d.imag()))
                throw NonFiniteSample("Jacobian sample is non-finite");
            out.matrix.at(i, j) = d;
        }
    }
    return out;
}

int complex_rank(const ComplexMatrix& m, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("rank tolerance must be > 0");
    if (m.rows == 0 || m.cols == 0) return 0;
    Eigen::MatrixXcd em(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) {
            const cplx v = m.at(i, j);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw NonFiniteSample("matrix entry is non-finite");
            em(i, j) = v;
        }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(em);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tol * sv[0]) ++rank;
    return rank;
}

}  // namespace hvlab::num
