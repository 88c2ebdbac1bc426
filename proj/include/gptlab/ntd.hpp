#pragma once

#include "gptlab/basis.hpp"
#include "gptlab/conductivity.hpp"
#include "gptlab/radial_ode.hpp"

#include <optional>

namespace gptlab {

struct FemOptions {
    int radial_cells = 48;
    int angular_cells = 192;
    /// Assemble on the mesh and its uniform refinement, extrapolate entries.
    bool richardson = true;
};

/// Truncated NtD map on zero-mean boundary data in the [cos 1..N, sin 1..N]
/// basis.  Diagonal (one value per order, shared by both parities) for radial
/// conductivities, dense 2N x 2N otherwise.
class NtDOperator {
public:
    static NtDOperator diagonal(Eigen::VectorXd per_order, double R);
    static NtDOperator dense(Eigen::MatrixXd matrix, double R);

    bool is_diagonal() const { return diag_.has_value(); }
    int max_order() const { return N_; }
    double radius() const { return R_; }
    double diag_entry(int n) const;
    Eigen::MatrixXd matrix() const;  // always 2N x 2N

    BoundaryFunction apply(const BoundaryFunction& g) const;
    /// || A - A^T || relative to || A ||.
    double symmetry_defect() const;

private:
    int N_ = 0;
    double R_ = 1.0;
    std::optional<Eigen::VectorXd> diag_;
    std::optional<Eigen::MatrixXd> dense_;
};

NtDOperator ntd_harmonic(int N, double R);
NtDOperator ntd_exterior(int N, double R);

/// n-th diagonal entry of Lambda_sigma for radial sigma.
double ntd_sigma_radial(const ConductivityField& sigma, int n, double R,
                        const RadialSolveOptions& opts = {});

/// Dense Lambda_sigma by piecewise-linear FEM on a polar mesh.
NtDOperator ntd_sigma_general(const ConductivityField& sigma, int N, double R,
                              const FemOptions& opts = {});

/// Lambda_sigma for any admissible field: spectral per-mode solves when
/// radial, FEM otherwise.
NtDOperator build_ntd(const ConductivityField& sigma, int N, double R,
                      const RadialSolveOptions& radial_opts = {},
                      const FemOptions& fem_opts = {});

/// Direct solve of (Lambda_sigma - Lambda_e)[g] = f.
BoundaryFunction ntd_difference_inverse_apply(const NtDOperator& lambda_sigma,
                                              const NtDOperator& lambda_e,
                                              const BoundaryFunction& f);

struct LandweberNtDResult {
    BoundaryFunction g;
    int iterations;
    double residual;
    bool converged;
};

/// Iterative alternative g_{k+1} = g_k + w A (f - A g_k), A = Lambda_sigma -
/// Lambda_e.  Throws on detected divergence.
LandweberNtDResult ntd_difference_inverse_landweber(const NtDOperator& lambda_sigma,
                                                    const NtDOperator& lambda_e,
                                                    const BoundaryFunction& f, double omega,
                                                    double tol, int max_iter);

}  // namespace gptlab
