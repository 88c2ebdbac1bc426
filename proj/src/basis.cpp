#include "gptlab/basis.hpp"

#include <cmath>

namespace gptlab {

double BoundaryFunction::evaluate(double theta) const {
    double v = 0.0;
    for (int n = 1; n <= N_; ++n)
        v += cos_coeff(n) * std::cos(n * theta) + sin_coeff(n) * std::sin(n * theta);
    return v;
}

void gauss_legendre(int npts, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    nodes.resize(npts);
    weights.resize(npts);
    // Newton iteration on Legendre polynomials, symmetric about 0.
    for (int i = 0; i < (npts + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= npts; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = npts * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[npts - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[npts - 1 - i] = w;
    }
}

DiskGrid DiskGrid::make(double R, int radial_cells, int points_per_cell,
                        int angular_order, const std::vector<double>& breakpoints) {
    if (R <= 0.0) throw InadmissibleError("DiskGrid: radius must be positive");
    if (radial_cells < 1 || points_per_cell < 1)
        throw InadmissibleError("DiskGrid: need at least one cell and one point");

    std::vector<double> edges{0.0};
    for (double b : breakpoints)
        if (b > 0.0 && b < R) edges.push_back(b);
    edges.push_back(R);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // Distribute cells over the segments proportionally to their length.
    std::vector<double> cell_edges;
    for (size_t s = 0; s + 1 < edges.size(); ++s) {
        double a = edges[s], b = edges[s + 1];
        int ncell = std::max(1, (int)std::lround(radial_cells * (b - a) / R));
        for (int c = 0; c < ncell; ++c)
            cell_edges.push_back(a + (b - a) * c / ncell);
    }
    cell_edges.push_back(R);

    Eigen::VectorXd gx, gw;
    gauss_legendre(points_per_cell, gx, gw);

    DiskGrid grid;
    grid.radius = R;
    int ncells = (int)cell_edges.size() - 1;
    grid.r_nodes.resize(ncells * points_per_cell);
    grid.r_weights.resize(ncells * points_per_cell);
    int k = 0;
    for (int c = 0; c < ncells; ++c) {
        double a = cell_edges[c], b = cell_edges[c + 1];
        for (int j = 0; j < points_per_cell; ++j, ++k) {
            double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[j];
            grid.r_nodes[k] = r;
            grid.r_weights[k] = 0.5 * (b - a) * gw[j] * r;  // Jacobian r
        }
    }

    grid.angular_order = angular_order;
    int ntheta = std::max(16, 4 * angular_order);
    grid.theta_nodes.resize(ntheta);
    for (int j = 0; j < ntheta; ++j) grid.theta_nodes[j] = 2.0 * M_PI * j / ntheta;
    grid.theta_weight = 2.0 * M_PI / ntheta;
    return grid;
}

BoundaryFunction harmonic_trace(HarmonicMode mode, double R, int max_order) {
    if (mode.order < 1) throw InadmissibleError("harmonic_trace: order must be >= 1");
    if (mode.order > max_order) throw InadmissibleError("harmonic_trace: order exceeds max_order");
    BoundaryFunction g(max_order);
    double v = std::pow(R, mode.order);
    if (mode.parity == Parity::cosine)
        g.cos_coeff(mode.order) = v;
    else
        g.sin_coeff(mode.order) = v;
    return g;
}

BoundaryFunction harmonic_normal_derivative(HarmonicMode mode, double R, int max_order) {
    if (mode.order < 1) throw InadmissibleError("harmonic_normal_derivative: order must be >= 1");
    if (mode.order > max_order)
        throw InadmissibleError("harmonic_normal_derivative: order exceeds max_order");
    BoundaryFunction g(max_order);
    double v = mode.order * std::pow(R, mode.order - 1);
    if (mode.parity == Parity::cosine)
        g.cos_coeff(mode.order) = v;
    else
        g.sin_coeff(mode.order) = v;
    return g;
}

double volume_integrate(const DiskGrid& grid, const std::function<double(double, double)>& field) {
    double total = 0.0;
    for (int i = 0; i < grid.r_nodes.size(); ++i) {
        double ring = 0.0;
        for (int j = 0; j < grid.theta_nodes.size(); ++j)
            ring += field(grid.r_nodes[i], grid.theta_nodes[j]);
        total += grid.r_weights[i] * grid.theta_weight * ring;
    }
    return total;
}

double volume_integrate_radial(const DiskGrid& grid, const std::function<double(double)>& field) {
    double total = 0.0;
    for (int i = 0; i < grid.r_nodes.size(); ++i)
        total += grid.r_weights[i] * field(grid.r_nodes[i]);
    return 2.0 * M_PI * total;
}

}  // namespace gptlab
