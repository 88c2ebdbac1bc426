#pragma once

#include "gptlab/basis.hpp"
#include "gptlab/conductivity.hpp"

#include <Eigen/Sparse>
#include <memory>
#include <vector>

namespace gptlab {

/// Structured triangulation of the disk: nr rings times ntheta sectors, the
/// r = 0 vertex shared by all sectors of the innermost fan.
struct PolarMesh {
    double R = 1.0;
    int nr = 0, ntheta = 0;
    std::vector<Eigen::Vector2d> pts;
    struct Tri {
        int v[3];
    };
    std::vector<Tri> tris;

    static PolarMesh make(double R, int nr, int ntheta);

    int vertex(int ring, int j) const {  // ring in [1, nr]
        return 1 + (ring - 1) * ntheta + ((j % ntheta + ntheta) % ntheta);
    }
    int num_vertices() const { return 1 + nr * ntheta; }
    /// Triangle containing the point (clamped to the disk).
    int locate(double r, double theta) const;
};

/// Neumann solver for div(sigma grad u) = 0 with the zero-boundary-mean
/// constraint enforced by a Lagrange multiplier.  The factorization is reused
/// across right-hand sides.
class FemSolver {
public:
    FemSolver(const ConductivityField& sigma, std::shared_ptr<const PolarMesh> mesh);

    const PolarMesh& mesh() const { return *mesh_; }

    /// Load vector for boundary flux datum cos/sin(n theta).
    Eigen::VectorXd boundary_load(int order, Parity parity) const;
    Eigen::VectorXd boundary_load(const BoundaryFunction& g) const;
    /// Nodal solution for a given load vector.
    Eigen::VectorXd solve(const Eigen::VectorXd& load) const;
    /// Piecewise-constant P1 gradients of a nodal field.
    std::vector<Eigen::Vector2d> gradients(const Eigen::VectorXd& u) const;

private:
    std::shared_ptr<const PolarMesh> mesh_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

/// Interior state with an evaluable gradient, for non-radial conductivities.
struct GriddedState {
    std::shared_ptr<const PolarMesh> mesh;
    Eigen::VectorXd u;
    std::vector<Eigen::Vector2d> grad;  // per triangle

    Eigen::Vector2d gradient_at(double r, double theta) const;
};

GriddedState fem_interior_state(const ConductivityField& sigma, const BoundaryFunction& flux,
                                double R, int radial_cells, int angular_cells);

}  // namespace gptlab
