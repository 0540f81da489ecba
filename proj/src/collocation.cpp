#include "kppw/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>

namespace kppw {

Mesh Mesh::uniform(double a, double b, int n)
{
    if (!(a < b) || n < 1)
        throw InvalidSpec("Mesh::uniform: need a < b and n >= 1");
    Mesh m;
    if (a < 0.0 && 0.0 < b) {
        // split intervals proportionally so that 0 is a node
        int nl = std::max(1, static_cast<int>(std::lround(n * (-a) / (b - a))));
        int nr = std::max(1, n - nl);
        m.points.reserve(nl + nr + 1);
        for (int i = 0; i <= nl; ++i)
            m.points.push_back(a + (0.0 - a) * i / nl);
        for (int i = 1; i <= nr; ++i)
            m.points.push_back(0.0 + (b - 0.0) * i / nr);
        m.points[nl] = 0.0;
    } else {
        m.points.reserve(n + 1);
        for (int i = 0; i <= n; ++i)
            m.points.push_back(a + (b - a) * i / n);
    }
    m.validate();
    return m;
}

int Mesh::nearest(double y) const
{
    auto it = std::lower_bound(points.begin(), points.end(), y);
    if (it == points.begin())
        return 0;
    if (it == points.end())
        return nodes() - 1;
    const int i = static_cast<int>(it - points.begin());
    return (y - points[i - 1] <= points[i] - y) ? i - 1 : i;
}

void Mesh::validate() const
{
    if (points.size() < 2)
        throw InvalidSpec("Mesh: need at least two points");
    for (size_t i = 1; i < points.size(); ++i)
        if (!(points[i] > points[i - 1]))
            throw InvalidSpec("Mesh: points must be strictly increasing");
    if (!std::isfinite(points.front()) || !std::isfinite(points.back()))
        throw InvalidSpec("Mesh: endpoints must be finite");
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Trip = Eigen::Triplet<double>;

struct Workspace {
    int m = 0, nodes = 0;
    std::vector<Eigen::VectorXd> g_node;   // rhs at each node
    std::vector<Eigen::MatrixXd> j_node;   // jacobian at each node
};

// Residual of the Lobatto IIIA 3-point step, scaled by 1/h so rows measure
// the defect per unit length:
//   Phi_i = [U_{i+1} - U_i]/h - (1/6)(G_i + 4 G_mid + G_{i+1}),
//   U_mid = (U_i + U_{i+1})/2 - (h/8)(G_{i+1} - G_i).
void interval_residual(const OdeSystem& sys, double h, const Eigen::VectorXd& ua,
                       const Eigen::VectorXd& ub, const Eigen::VectorXd& ga,
                       const Eigen::VectorXd& gb, Eigen::VectorXd& phi,
                       Eigen::VectorXd& umid, Eigen::VectorXd& gmid)
{
    umid = 0.5 * (ua + ub) - (h / 8.0) * (gb - ga);
    sys.rhs(umid, gmid);
    phi = (ub - ua) / h - (ga + 4.0 * gmid + gb) / 6.0;
}

double residual_norm(const Eigen::VectorXd& r)
{
    double nrm = 0.0;
    for (int i = 0; i < r.size(); ++i) {
        const double a = std::abs(r[i]);
        if (!std::isfinite(a))
            return std::numeric_limits<double>::infinity();
        nrm = std::max(nrm, a);
    }
    return nrm;
}

Eigen::VectorXd assemble_residual(const OdeSystem& sys, const Mesh& mesh,
                                  const std::vector<BoundaryFunctional>& bcs,
                                  const Eigen::MatrixXd& x, Workspace& ws)
{
    const int m = sys.dim;
    const int nn = mesh.nodes();
    Eigen::VectorXd r(static_cast<long>(nn) * m);

    ws.g_node.resize(nn);
    Eigen::VectorXd u(m), g(m);
    for (int i = 0; i < nn; ++i) {
        u = x.row(i);
        sys.rhs(u, g);
        ws.g_node[i] = g;
    }

    Eigen::VectorXd phi(m), umid(m), gmid(m);
    for (int i = 0; i < nn - 1; ++i) {
        const double h = mesh.points[i + 1] - mesh.points[i];
        interval_residual(sys, h, x.row(i), x.row(i + 1), ws.g_node[i],
                          ws.g_node[i + 1], phi, umid, gmid);
        r.segment(static_cast<long>(i) * m, m) = phi;
    }
    for (size_t b = 0; b < bcs.size(); ++b) {
        const auto& bc = bcs[b];
        r[static_cast<long>(nn - 1) * m + b] =
            bc.weights.dot(x.row(bc.node).transpose()) - bc.rhs;
    }
    return r;
}

void assemble_jacobian(const OdeSystem& sys, const Mesh& mesh,
                       const std::vector<BoundaryFunctional>& bcs,
                       const Eigen::MatrixXd& x, Workspace& ws,
                       std::vector<Trip>& trips)
{
    const int m = sys.dim;
    const int nn = mesh.nodes();
    trips.clear();

    ws.j_node.resize(nn);
    Eigen::VectorXd u(m);
    Eigen::MatrixXd j(m, m);
    for (int i = 0; i < nn; ++i) {
        u = x.row(i);
        sys.jacobian(u, j);
        ws.j_node[i] = j;
    }

    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd umid(m), gmid(m);
    Eigen::MatrixXd jmid(m, m), da(m, m), db(m, m);
    for (int i = 0; i < nn - 1; ++i) {
        const double h = mesh.points[i + 1] - mesh.points[i];
        umid = 0.5 * (x.row(i) + x.row(i + 1)).transpose() -
               (h / 8.0) * (ws.g_node[i + 1] - ws.g_node[i]);
        sys.jacobian(umid, jmid);
        // dU_mid/dU_i = I/2 + (h/8) J_i,  dU_mid/dU_{i+1} = I/2 - (h/8) J_{i+1}
        da = -id / h -
             (ws.j_node[i] + 4.0 * jmid * (0.5 * id + (h / 8.0) * ws.j_node[i])) / 6.0;
        db = id / h -
             (ws.j_node[i + 1] + 4.0 * jmid * (0.5 * id - (h / 8.0) * ws.j_node[i + 1])) / 6.0;
        const long r0 = static_cast<long>(i) * m;
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                if (da(r, c) != 0.0)
                    trips.emplace_back(r0 + r, static_cast<long>(i) * m + c, da(r, c));
                if (db(r, c) != 0.0)
                    trips.emplace_back(r0 + r, static_cast<long>(i + 1) * m + c, db(r, c));
            }
    }
    for (size_t b = 0; b < bcs.size(); ++b) {
        const auto& bc = bcs[b];
        const long row = static_cast<long>(nn - 1) * m + b;
        for (int c = 0; c < m; ++c)
            if (bc.weights[c] != 0.0)
                trips.emplace_back(row, static_cast<long>(bc.node) * m + c, bc.weights[c]);
    }
}

} // namespace

CollocationResult collocate(const OdeSystem& sys, const Mesh& mesh,
                            const std::vector<BoundaryFunctional>& bcs,
                            const Eigen::MatrixXd& guess, const NewtonOptions& opt)
{
    mesh.validate();
    const int m = sys.dim;
    const int nn = mesh.nodes();
    if (static_cast<int>(bcs.size()) != m)
        throw ClosureCountMismatch("collocate: need exactly dim boundary rows, got " +
                                   std::to_string(bcs.size()));
    if (guess.rows() != nn || guess.cols() != m)
        throw InvalidSpec("collocate: guess has wrong shape");

    CollocationResult res;
    Eigen::MatrixXd x = guess;
    Workspace ws;
    ws.m = m;
    ws.nodes = nn;

    Eigen::VectorXd r = assemble_residual(sys, mesh, bcs, x, ws);
    double rnorm = residual_norm(r);
    res.values = x;
    res.residual_norm = rnorm;

    SpMat jac(static_cast<long>(nn) * m, static_cast<long>(nn) * m);
    Eigen::SparseLU<SpMat> lu;
    std::vector<Trip> trips;
    bool analyzed = false;
    int stalls = 0;

    for (int it = 0; it < opt.max_iters; ++it) {
        if (rnorm < opt.tol) {
            res.status = SolveStatus::Converged;
            res.values = x;
            res.residual_norm = rnorm;
            res.iters = it;
            return res;
        }
        assemble_jacobian(sys, mesh, bcs, x, ws, trips);
        jac.setFromTriplets(trips.begin(), trips.end());
        if (!analyzed) {
            lu.analyzePattern(jac);
            analyzed = true;
        }
        lu.factorize(jac);
        if (lu.info() != Eigen::Success) {
            res.status = SolveStatus::SingularJacobian;
            res.iters = it;
            return res;
        }
        Eigen::VectorXd step = lu.solve(-r);

        // halving line search on the residual max-norm
        double alpha = 1.0;
        bool accepted = false;
        Eigen::MatrixXd xt(nn, m);
        for (int hlv = 0; hlv <= opt.max_halvings; ++hlv) {
            for (int i = 0; i < nn; ++i)
                xt.row(i) = x.row(i) + alpha * step.segment(static_cast<long>(i) * m, m).transpose();
            Eigen::VectorXd rt = assemble_residual(sys, mesh, bcs, xt, ws);
            const double rtn = residual_norm(rt);
            if (rtn < (1.0 - 1e-4 * alpha) * rnorm) {
                x.swap(xt);
                r = std::move(rt);
                rnorm = rtn;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        res.iters = it + 1;
        if (!accepted) {
            if (++stalls >= 2)
                break;
        } else {
            stalls = 0;
            if (rnorm < res.residual_norm) {
                res.values = x;
                res.residual_norm = rnorm;
            }
        }
    }
    if (rnorm < opt.tol) {
        res.status = SolveStatus::Converged;
        res.values = x;
        res.residual_norm = rnorm;
    } else {
        res.status = SolveStatus::NoConvergence;
        res.residual_norm = std::min(res.residual_norm, rnorm);
    }
    return res;
}

Mesh refine_mesh(const Mesh& mesh, const Eigen::MatrixXd& values, double factor)
{
    const int n = mesh.intervals();
    const int target = std::max(n + 1, static_cast<int>(std::lround(n * factor)));

    // indicator: change of the state across the interval (front/oscillation
    // regions dominate), floored so quiet regions keep some resolution
    std::vector<double> ind(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        for (int c = 0; c < values.cols(); ++c)
            d = std::max(d, std::abs(values(i + 1, c) - values(i, c)));
        ind[i] = d + 1e-3;
        total += ind[i];
    }

    Mesh out;
    out.points.push_back(mesh.points.front());
    for (int i = 0; i < n; ++i) {
        const int pieces =
            std::max(1, static_cast<int>(std::lround(target * ind[i] / total)));
        const double a = mesh.points[i], b = mesh.points[i + 1];
        for (int p = 1; p <= pieces; ++p)
            out.points.push_back(a + (b - a) * p / pieces);
    }
    // nodes of the source mesh are preserved, so the y = 0 node survives
    out.validate();
    return out;
}

Eigen::MatrixXd interpolate_values(const Mesh& from, const Eigen::MatrixXd& values,
                                   const Mesh& to)
{
    const int m = static_cast<int>(values.cols());
    Eigen::MatrixXd out(to.nodes(), m);
    for (int t = 0; t < to.nodes(); ++t) {
        const double y = std::clamp(to.points[t], from.left(), from.right());
        auto it = std::upper_bound(from.points.begin(), from.points.end(), y);
        int i = static_cast<int>(it - from.points.begin()) - 1;
        i = std::clamp(i, 0, from.intervals() - 1);
        const double h = from.points[i + 1] - from.points[i];
        const double s = (y - from.points[i]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        for (int c = 0; c < m; ++c) {
            // derivative of component c is component c+1 when available
            const double da = (c + 1 < m)
                                  ? values(i, c + 1)
                                  : (values(i + 1, c) - values(i, c)) / h;
            const double db = (c + 1 < m)
                                  ? values(i + 1, c + 1)
                                  : (values(i + 1, c) - values(i, c)) / h;
            out(t, c) = h00 * values(i, c) + h10 * h * da + h01 * values(i + 1, c) +
                        h11 * h * db;
        }
    }
    return out;
}

} // namespace kppw
