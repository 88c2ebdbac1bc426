#include "gptlab/fem.hpp"

#include <cmath>

namespace gptlab {

PolarMesh PolarMesh::make(double R, int nr, int ntheta) {
    if (nr < 2 || ntheta < 8) throw InadmissibleError("PolarMesh: mesh too coarse");
    PolarMesh m;
    m.R = R;
    m.nr = nr;
    m.ntheta = ntheta;
    m.pts.resize(m.num_vertices());
    m.pts[0] = Eigen::Vector2d::Zero();
    for (int i = 1; i <= nr; ++i) {
        double r = R * i / nr;
        for (int j = 0; j < ntheta; ++j) {
            double th = 2.0 * M_PI * j / ntheta;
            m.pts[m.vertex(i, j)] = {r * std::cos(th), r * std::sin(th)};
        }
    }
    for (int j = 0; j < ntheta; ++j)
        m.tris.push_back({{0, m.vertex(1, j), m.vertex(1, j + 1)}});
    for (int i = 1; i < nr; ++i) {
        for (int j = 0; j < ntheta; ++j) {
            int a = m.vertex(i, j), b = m.vertex(i + 1, j);
            int c = m.vertex(i + 1, j + 1), d = m.vertex(i, j + 1);
            m.tris.push_back({{a, b, c}});
            m.tris.push_back({{a, c, d}});
        }
    }
    return m;
}

int PolarMesh::locate(double r, double theta) const {
    r = std::min(r, R * (1.0 - 1e-12));
    double t = theta / (2.0 * M_PI);
    t -= std::floor(t);
    int j = std::min((int)(t * ntheta), ntheta - 1);
    double dr = R / nr;
    int ring = std::min((int)(r / dr), nr - 1);  // cell between ring and ring+1
    if (ring == 0) return j;                     // center fan
    size_t base = (size_t)ntheta + 2 * (size_t)((ring - 1) * ntheta + j);
    // Two triangles per quad; pick by the diagonal from (ring, j) to
    // (ring+1, j+1) in local (r, theta) coordinates.
    double lr = r / dr - ring;
    double lt = t * ntheta - j;
    return (int)(lr > lt ? base : base + 1);
}

namespace {

struct Assembly {
    Eigen::SparseMatrix<double> kkt;  // stiffness bordered by the constraint
    int nvert;
};

Assembly assemble(const ConductivityField& sigma, const PolarMesh& mesh) {
    int nv = mesh.num_vertices();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(mesh.tris.size() * 9 + 4 * mesh.ntheta);

    for (const auto& tri : mesh.tris) {
        const auto &p0 = mesh.pts[tri.v[0]], &p1 = mesh.pts[tri.v[1]], &p2 = mesh.pts[tri.v[2]];
        double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
        double area = 0.5 * std::abs(det);
        Eigen::Vector2d g[3];
        g[0] = {p1.y() - p2.y(), p2.x() - p1.x()};
        g[1] = {p2.y() - p0.y(), p0.x() - p2.x()};
        g[2] = {p0.y() - p1.y(), p1.x() - p0.x()};
        Eigen::Vector2d c = (p0 + p1 + p2) / 3.0;
        double sc = sigma(c.norm(), std::atan2(c.y(), c.x()));
        double scale = sc / (4.0 * area);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                trips.emplace_back(tri.v[a], tri.v[b], scale * g[a].dot(g[b]));
    }

    // Constraint row/column: lumped boundary integral of u.
    double edge_len = 2.0 * mesh.R * std::sin(M_PI / mesh.ntheta);
    for (int j = 0; j < mesh.ntheta; ++j) {
        int v = mesh.vertex(mesh.nr, j);
        trips.emplace_back(v, nv, edge_len);
        trips.emplace_back(nv, v, edge_len);
    }

    Assembly out;
    out.nvert = nv;
    out.kkt.resize(nv + 1, nv + 1);
    out.kkt.setFromTriplets(trips.begin(), trips.end());
    return out;
}

}  // namespace

FemSolver::FemSolver(const ConductivityField& sigma, std::shared_ptr<const PolarMesh> mesh)
    : mesh_(std::move(mesh)) {
    auto sys = assemble(sigma, *mesh_);
    lu_.compute(sys.kkt);
    if (lu_.info() != Eigen::Success)
        throw SolveError("FEM: singular stiffness system (factorization failed)");
}

Eigen::VectorXd FemSolver::boundary_load(int order, Parity parity) const {
    BoundaryFunction g(std::max(order, 1));
    if (parity == Parity::cosine)
        g.cos_coeff(order) = 1.0;
    else
        g.sin_coeff(order) = 1.0;
    return boundary_load(g);
}

Eigen::VectorXd FemSolver::boundary_load(const BoundaryFunction& g) const {
    const auto& m = *mesh_;
    Eigen::VectorXd load = Eigen::VectorXd::Zero(m.num_vertices() + 1);
    double dth = 2.0 * M_PI / m.ntheta;
    double edge_len = 2.0 * m.R * std::sin(M_PI / m.ntheta);
    // 4-point Gauss in theta per boundary edge, hat functions linear in theta.
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                 0.3478548451374538};
    for (int j = 0; j < m.ntheta; ++j) {
        int va = m.vertex(m.nr, j), vb = m.vertex(m.nr, j + 1);
        double t0 = dth * j;
        for (int q = 0; q < 4; ++q) {
            double t = 0.5 * (gx[q] + 1.0);
            double th = t0 + t * dth;
            double w = 0.5 * gw[q] * edge_len * g.evaluate(th);
            load[va] += w * (1.0 - t);
            load[vb] += w * t;
        }
    }
    return load;
}

Eigen::VectorXd FemSolver::solve(const Eigen::VectorXd& load) const {
    Eigen::VectorXd u = lu_.solve(load);
    if (lu_.info() != Eigen::Success) throw SolveError("FEM: linear solve failed");
    return u.head(mesh_->num_vertices());
}

std::vector<Eigen::Vector2d> FemSolver::gradients(const Eigen::VectorXd& u) const {
    const auto& m = *mesh_;
    std::vector<Eigen::Vector2d> out(m.tris.size());
    for (size_t t = 0; t < m.tris.size(); ++t) {
        const auto& tri = m.tris[t];
        const auto &p0 = m.pts[tri.v[0]], &p1 = m.pts[tri.v[1]], &p2 = m.pts[tri.v[2]];
        double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
        Eigen::Vector2d g1{p2.y() - p0.y(), p0.x() - p2.x()};
        Eigen::Vector2d g2{p0.y() - p1.y(), p1.x() - p0.x()};
        Eigen::Vector2d g0 = -g1 - g2;
        out[t] = (u[tri.v[0]] * g0 + u[tri.v[1]] * g1 + u[tri.v[2]] * g2) / det;
    }
    return out;
}

Eigen::Vector2d GriddedState::gradient_at(double r, double theta) const {
    return grad[mesh->locate(r, theta)];
}

GriddedState fem_interior_state(const ConductivityField& sigma, const BoundaryFunction& flux,
                                double R, int radial_cells, int angular_cells) {
    auto mesh = std::make_shared<PolarMesh>(PolarMesh::make(R, radial_cells, angular_cells));
    FemSolver solver(sigma, mesh);
    GriddedState st;
    st.mesh = mesh;
    st.u = solver.solve(solver.boundary_load(flux));
    st.grad = solver.gradients(st.u);
    return st;
}

}  // namespace gptlab
