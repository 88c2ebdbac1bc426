#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

namespace gptlab {

/// Errors raised by the solvers (ill-conditioning, non-convergence, ...).
class SolveError : public std::runtime_error {
public:
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

/// Data that cannot be processed as requested (model-class mismatch,
/// out-of-range targets, ...).
class InadmissibleError : public std::runtime_error {
public:
    explicit InadmissibleError(const std::string& what) : std::runtime_error(what) {}
};

struct DiskGeometry {
    double radius = 1.0;
    double area() const { return M_PI * radius * radius; }
};

enum class Parity { cosine, sine };

/// One trigonometric mode on the circle: r^n cos(n theta) or r^n sin(n theta).
/// The zero mode is excluded; NtD maps act on zero-mean data only.
struct HarmonicMode {
    int order;      // n >= 1
    Parity parity;
};

/// A zero-mean function on the circle of radius R, stored as coefficients of
/// cos(n theta), sin(n theta) for n = 1..N.  Layout of the packed vector is
/// [c_1..c_N, s_1..s_N].
class BoundaryFunction {
public:
    explicit BoundaryFunction(int max_order)
        : N_(max_order), coeffs_(Eigen::VectorXd::Zero(2 * max_order)) {
        if (max_order < 1) throw InadmissibleError("BoundaryFunction: max_order must be >= 1");
    }
    BoundaryFunction(int max_order, Eigen::VectorXd packed)
        : N_(max_order), coeffs_(std::move(packed)) {
        if (coeffs_.size() != 2 * N_) throw InadmissibleError("BoundaryFunction: bad coefficient size");
    }

    int max_order() const { return N_; }
    double cos_coeff(int n) const { return coeffs_[n - 1]; }
    double sin_coeff(int n) const { return coeffs_[N_ + n - 1]; }
    double& cos_coeff(int n) { return coeffs_[n - 1]; }
    double& sin_coeff(int n) { return coeffs_[N_ + n - 1]; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    Eigen::VectorXd& coeffs() { return coeffs_; }

    double evaluate(double theta) const;

private:
    int N_;
    Eigen::VectorXd coeffs_;
};

/// Tensor-product quadrature grid on the disk: composite Gauss-Legendre nodes
/// in r (weights carry the Jacobian r) times a uniform trapezoid rule in theta,
/// which is spectrally accurate for periodic integrands.
struct DiskGrid {
    double radius = 1.0;
    Eigen::VectorXd r_nodes;    // strictly increasing in (0, R)
    Eigen::VectorXd r_weights;  // include the Jacobian r
    int angular_order = 16;
    Eigen::VectorXd theta_nodes;
    double theta_weight = 0.0;

    /// Composite Gauss-Legendre with `points_per_cell` nodes on each of
    /// `radial_cells` subintervals of (0, R); `breakpoints` force cell edges
    /// (used for discontinuous integrands such as indicator perturbations).
    static DiskGrid make(double R, int radial_cells, int points_per_cell,
                         int angular_order, const std::vector<double>& breakpoints = {});

    double area() const { return M_PI * radius * radius; }
};

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int npts, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

BoundaryFunction harmonic_trace(HarmonicMode mode, double R, int max_order);
BoundaryFunction harmonic_normal_derivative(HarmonicMode mode, double R, int max_order);

double volume_integrate(const DiskGrid& grid, const std::function<double(double, double)>& field);
/// Radial integrand: skips the angular loop, still integrates over the disk.
double volume_integrate_radial(const DiskGrid& grid, const std::function<double(double)>& field);

}  // namespace gptlab
