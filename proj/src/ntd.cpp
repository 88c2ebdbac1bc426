#include "gptlab/ntd.hpp"

#include "gptlab/fem.hpp"
#include "gptlab/threading.hpp"

#include <cmath>

namespace gptlab {

NtDOperator NtDOperator::diagonal(Eigen::VectorXd per_order, double R) {
    NtDOperator op;
    op.N_ = (int)per_order.size();
    op.R_ = R;
    op.diag_ = std::move(per_order);
    return op;
}

NtDOperator NtDOperator::dense(Eigen::MatrixXd matrix, double R) {
    if (matrix.rows() != matrix.cols() || matrix.rows() % 2 != 0)
        throw InadmissibleError("NtDOperator: dense block must be 2N x 2N");
    NtDOperator op;
    op.N_ = (int)matrix.rows() / 2;
    op.R_ = R;
    op.dense_ = std::move(matrix);
    return op;
}

double NtDOperator::diag_entry(int n) const {
    if (n < 1 || n > N_) throw InadmissibleError("NtDOperator: order out of range");
    if (diag_) return (*diag_)[n - 1];
    return (*dense_)(n - 1, n - 1);
}

Eigen::MatrixXd NtDOperator::matrix() const {
    if (dense_) return *dense_;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * N_, 2 * N_);
    for (int n = 1; n <= N_; ++n) m(n - 1, n - 1) = m(N_ + n - 1, N_ + n - 1) = (*diag_)[n - 1];
    return m;
}

BoundaryFunction NtDOperator::apply(const BoundaryFunction& g) const {
    if (g.max_order() != N_) throw InadmissibleError("NtDOperator: order mismatch");
    if (diag_) {
        BoundaryFunction out(N_);
        for (int n = 1; n <= N_; ++n) {
            out.cos_coeff(n) = (*diag_)[n - 1] * g.cos_coeff(n);
            out.sin_coeff(n) = (*diag_)[n - 1] * g.sin_coeff(n);
        }
        return out;
    }
    return BoundaryFunction(N_, (*dense_) * g.coeffs());
}

double NtDOperator::symmetry_defect() const {
    Eigen::MatrixXd m = matrix();
    double scale = m.norm();
    if (scale == 0.0) return 0.0;
    return (m - m.transpose()).norm() / scale;
}

NtDOperator ntd_harmonic(int N, double R) {
    if (N < 1) throw InadmissibleError("ntd_harmonic: N must be >= 1");
    Eigen::VectorXd d(N);
    for (int n = 1; n <= N; ++n) d[n - 1] = R / n;
    return NtDOperator::diagonal(d, R);
}

NtDOperator ntd_exterior(int N, double R) {
    if (N < 1) throw InadmissibleError("ntd_exterior: N must be >= 1");
    Eigen::VectorXd d(N);
    for (int n = 1; n <= N; ++n) d[n - 1] = -R / n;
    return NtDOperator::diagonal(d, R);
}

double ntd_sigma_radial(const ConductivityField& sigma, int n, double R,
                        const RadialSolveOptions& opts) {
    return solve_radial_mode(sigma, n, R, opts).ntd_value;
}

namespace {

Eigen::MatrixXd fem_ntd_matrix(const ConductivityField& sigma, int N, double R, int nr,
                               int ntheta) {
    auto mesh = std::make_shared<PolarMesh>(PolarMesh::make(R, nr, ntheta));
    FemSolver solver(sigma, mesh);
    std::vector<Eigen::VectorXd> loads(2 * N);
    for (int n = 1; n <= N; ++n) {
        loads[n - 1] = solver.boundary_load(n, Parity::cosine);
        loads[N + n - 1] = solver.boundary_load(n, Parity::sine);
    }
    std::vector<Eigen::VectorXd> sols(2 * N);
    parallel_for(2 * N, [&](int j) { sols[j] = solver.solve(loads[j]); });
    // Extracting trace coefficients by pairing with the same load vectors
    // keeps the discrete operator exactly self-adjoint.
    Eigen::MatrixXd A(2 * N, 2 * N);
    for (int i = 0; i < 2 * N; ++i)
        for (int j = 0; j < 2 * N; ++j)
            A(i, j) = loads[i].head(mesh->num_vertices()).dot(sols[j]) / (M_PI * R);
    return A;
}

}  // namespace

NtDOperator ntd_sigma_general(const ConductivityField& sigma, int N, double R,
                              const FemOptions& opts) {
    if (N < 1) throw InadmissibleError("ntd_sigma_general: N must be >= 1");
    Eigen::MatrixXd A = fem_ntd_matrix(sigma, N, R, opts.radial_cells, opts.angular_cells);
    if (opts.richardson) {
        Eigen::MatrixXd A2 = fem_ntd_matrix(sigma, N, R, 2 * opts.radial_cells,
                                            2 * opts.angular_cells);
        A = (4.0 * A2 - A) / 3.0;
    }
    return NtDOperator::dense(A, R);
}

NtDOperator build_ntd(const ConductivityField& sigma, int N, double R,
                      const RadialSolveOptions& radial_opts, const FemOptions& fem_opts) {
    if (sigma.is_radial()) {
        Eigen::VectorXd d(N);
        parallel_for(N, [&](int i) { d[i] = ntd_sigma_radial(sigma, i + 1, R, radial_opts); });
        return NtDOperator::diagonal(d, R);
    }
    return ntd_sigma_general(sigma, N, R, fem_opts);
}

BoundaryFunction ntd_difference_inverse_apply(const NtDOperator& lambda_sigma,
                                              const NtDOperator& lambda_e,
                                              const BoundaryFunction& f) {
    int N = f.max_order();
    if (lambda_sigma.max_order() != N || lambda_e.max_order() != N)
        throw InadmissibleError("ntd_difference_inverse_apply: order mismatch");
    if (lambda_sigma.is_diagonal() && lambda_e.is_diagonal()) {
        BoundaryFunction g(N);
        for (int n = 1; n <= N; ++n) {
            double d = lambda_sigma.diag_entry(n) - lambda_e.diag_entry(n);
            if (std::abs(d) < 1e-300)
                throw SolveError("ntd_difference_inverse_apply: zero diagonal at mode " +
                                 std::to_string(n));
            g.cos_coeff(n) = f.cos_coeff(n) / d;
            g.sin_coeff(n) = f.sin_coeff(n) / d;
        }
        return g;
    }
    Eigen::MatrixXd A = lambda_sigma.matrix() - lambda_e.matrix();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    double rcond = lu.rcond();
    if (rcond < 1e-14)
        throw SolveError("ntd_difference_inverse_apply: ill-conditioned system, rcond = " +
                         std::to_string(rcond));
    return BoundaryFunction(N, lu.solve(f.coeffs()));
}

LandweberNtDResult ntd_difference_inverse_landweber(const NtDOperator& lambda_sigma,
                                                    const NtDOperator& lambda_e,
                                                    const BoundaryFunction& f, double omega,
                                                    double tol, int max_iter) {
    if (omega <= 0.0) throw InadmissibleError("ntd landweber: step must be positive");
    Eigen::MatrixXd A = lambda_sigma.matrix() - lambda_e.matrix();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(f.coeffs().size());
    double prev = std::numeric_limits<double>::infinity();
    int growing = 0;
    double res = 0.0;
    for (int k = 0; k < max_iter; ++k) {
        Eigen::VectorXd r = f.coeffs() - A * g;
        res = r.norm();
        if (res <= tol)
            return {BoundaryFunction(f.max_order(), g), k, res, true};
        growing = res > prev ? growing + 1 : 0;
        if (growing >= 10 || !std::isfinite(res))
            throw SolveError("ntd landweber: divergence detected, residual = " +
                             std::to_string(res));
        prev = res;
        g += omega * (A * r);  // A is self-adjoint
    }
    return {BoundaryFunction(f.max_order(), g), max_iter, res, false};
}

}  // namespace gptlab
