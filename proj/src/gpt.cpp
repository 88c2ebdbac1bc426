#include "gptlab/gpt.hpp"

#include "gptlab/fem.hpp"
#include "gptlab/threading.hpp"

#include <cmath>

namespace gptlab {

HarmonicCoeffs HarmonicCoeffs::single(int n, Parity parity, int max_order, double amplitude) {
    HarmonicCoeffs h(std::max(n, max_order));
    if (parity == Parity::cosine)
        h.cos_a[n - 1] = amplitude;
    else
        h.sin_a[n - 1] = amplitude;
    return h;
}

double HarmonicCoeffs::evaluate(double r, double theta) const {
    double v = 0.0;
    for (int n = 1; n <= max_order(); ++n)
        v += std::pow(r, n) *
             (cos_a[n - 1] * std::cos(n * theta) + sin_a[n - 1] * std::sin(n * theta));
    return v;
}

Eigen::Vector2d HarmonicCoeffs::gradient_polar(double r, double theta) const {
    double gr = 0.0, gt = 0.0;
    for (int n = 1; n <= max_order(); ++n) {
        double p = n * std::pow(r, n - 1);
        double c = std::cos(n * theta), s = std::sin(n * theta);
        gr += p * (cos_a[n - 1] * c + sin_a[n - 1] * s);
        gt += p * (-cos_a[n - 1] * s + sin_a[n - 1] * c);
    }
    return {gr, gt};
}

ContractedGPTTable ContractedGPTTable::from_assembled(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0)
        throw InadmissibleError("ContractedGPTTable: assembled matrix must be 2N x 2N");
    int N = (int)m.rows() / 2;
    ContractedGPTTable t(N);
    t.cc_ = m.topLeftCorner(N, N);
    t.cs_ = m.topRightCorner(N, N);
    t.sc_ = m.bottomLeftCorner(N, N);
    t.ss_ = m.bottomRightCorner(N, N);
    return t;
}

Eigen::MatrixXd ContractedGPTTable::assembled() const {
    Eigen::MatrixXd m(2 * N_, 2 * N_);
    m.topLeftCorner(N_, N_) = cc_;
    m.topRightCorner(N_, N_) = cs_;
    m.bottomLeftCorner(N_, N_) = sc_;
    m.bottomRightCorner(N_, N_) = ss_;
    return m;
}

double ContractedGPTTable::quadratic_form(const HarmonicCoeffs& h) const {
    if (h.max_order() > N_)
        throw InadmissibleError("quadratic_form: harmonic order exceeds table order");
    Eigen::VectorXd a = Eigen::VectorXd::Zero(2 * N_);
    a.head(h.max_order()) = h.cos_a;
    a.segment(N_, h.max_order()) = h.sin_a;
    return a.dot(assembled() * a);
}

RadialTransmissionState radial_transmission_state(const ConductivityField& sigma, int n, double R,
                                                  const RadialSolveOptions& opts) {
    RadialTransmissionState st;
    st.order = n;
    st.sol = solve_radial_mode(sigma, n, R, opts);
    st.lambda = st.sol.ntd_value;
    st.psi = 2.0 * std::pow(R, n) / (st.lambda + R / n);
    return st;
}

ContractedGPTTable contracted_gpts(const NtDOperator& lambda_sigma) {
    int N = lambda_sigma.max_order();
    double R = lambda_sigma.radius();
    if (lambda_sigma.is_diagonal()) {
        ContractedGPTTable t(N);
        for (int n = 1; n <= N; ++n) {
            double lam = lambda_sigma.diag_entry(n);
            double m = 2.0 * M_PI * n * std::pow(R, 2 * n) * (R / n - lam) / (R / n + lam);
            t.block_cc()(n - 1, n - 1) = m;
            t.block_ss()(n - 1, n - 1) = m;
        }
        return t;
    }
    // Dense composition pi R^{m+1} * Lam1^-1 (Lam1 - Lam_s)(Lam_s - Lam_e)^-1
    // (Lam1 - Lam_e) applied to the normal-derivative coefficients n R^{n-1}.
    Eigen::VectorXd lam1(2 * N), lame(2 * N), dnu(2 * N), pair(2 * N);
    for (int n = 1; n <= N; ++n) {
        lam1[n - 1] = lam1[N + n - 1] = R / n;
        lame[n - 1] = lame[N + n - 1] = -R / n;
        dnu[n - 1] = dnu[N + n - 1] = n * std::pow(R, n - 1);
        pair[n - 1] = pair[N + n - 1] = M_PI * std::pow(R, n + 1);
    }
    Eigen::MatrixXd S = lambda_sigma.matrix();
    Eigen::MatrixXd rhs = (lam1 - lame).cwiseProduct(dnu).asDiagonal();
    Eigen::MatrixXd mid =
        (S - (Eigen::MatrixXd)lame.asDiagonal()).partialPivLu().solve(rhs);
    Eigen::MatrixXd composed =
        lam1.cwiseInverse().asDiagonal() *
        (((Eigen::MatrixXd)lam1.asDiagonal() - S) * mid);
    Eigen::MatrixXd M = pair.asDiagonal() * composed;
    return ContractedGPTTable::from_assembled(M);
}

ContractedGPTTable contracted_gpts(const ConductivityField& sigma, int N, double R,
                                   const RadialSolveOptions& radial_opts,
                                   const FemOptions& fem_opts) {
    return contracted_gpts(build_ntd(sigma, N, R, radial_opts, fem_opts));
}

double gpt_homogeneous_disk(double k, double R, int n) {
    if (k <= 0.0) throw InadmissibleError("gpt_homogeneous_disk: k must be positive");
    if (n < 1) throw InadmissibleError("gpt_homogeneous_disk: n must be >= 1");
    return 2.0 * M_PI * n * std::pow(R, 2 * n) * (k - 1.0) / (k + 1.0);
}

FarFieldValue far_field_eval(const ContractedGPTTable& table, const HarmonicCoeffs& h, double x,
                             double y, double R) {
    double r = std::hypot(x, y);
    if (r <= R) throw InadmissibleError("far_field_eval: point is not exterior");
    double theta = std::atan2(y, x);
    int N = table.max_order();
    int Nh = std::min(h.max_order(), N);
    double value = 0.0, last = 0.0;
    for (int m = 1; m <= N; ++m) {
        double sc = 0.0, ss = 0.0;
        for (int n = 1; n <= Nh; ++n) {
            sc += table.cc(m, n) * h.cos_a[n - 1] + table.cs(m, n) * h.sin_a[n - 1];
            ss += table.sc(m, n) * h.cos_a[n - 1] + table.ss(m, n) * h.sin_a[n - 1];
        }
        double decay = 1.0 / (2.0 * M_PI * m * std::pow(r, m));
        last = -decay * (std::cos(m * theta) * sc + std::sin(m * theta) * ss);
        value += last;
    }
    return {value, std::abs(last)};
}

FarFieldValue far_field_eval(const ConductivityField& sigma, const HarmonicCoeffs& h, double x,
                             double y, double R, int N, const RadialSolveOptions& opts) {
    auto table = contracted_gpts(sigma, std::max(N, h.max_order()), R, opts);
    return far_field_eval(table, h, x, y, R);
}

namespace {

DiskGrid quadrature_grid(const ConductivityField& sigma, double R, int max_order) {
    std::vector<double> breaks;
    if (sigma.support_radius() < R) breaks.push_back(sigma.support_radius());
    return DiskGrid::make(R, 64, 6, std::max(8, 2 * max_order + 2), breaks);
}

}  // namespace

double gpt_volume_identity(const ConductivityField& sigma, const HarmonicCoeffs& h1,
                           const HarmonicCoeffs& h2, double R, const RadialSolveOptions& opts,
                           const FemOptions& fem_opts) {
    int N1 = h1.max_order();
    DiskGrid grid = quadrature_grid(sigma, R, std::max(N1, h2.max_order()));

    if (sigma.is_radial()) {
        std::vector<RadialTransmissionState> states(N1);
        parallel_for(N1, [&](int i) {
            states[i] = radial_transmission_state(sigma, i + 1, R, opts);
        });
        auto grad_u1 = [&](double r, double theta) -> Eigen::Vector2d {
            double gr = 0.0, gt = 0.0;
            for (int n = 1; n <= N1; ++n) {
                double ac = h1.cos_a[n - 1], as = h1.sin_a[n - 1];
                if (ac == 0.0 && as == 0.0) continue;
                const auto& st = states[n - 1];
                double f = st.sol.value(r), df = st.sol.dvalue(r);
                double c = std::cos(n * theta), s = std::sin(n * theta);
                gr += st.psi * df * (ac * c + as * s);
                gt += st.psi * (n * f / r) * (-ac * s + as * c);
            }
            return {gr, gt};
        };
        return volume_integrate(grid, [&](double r, double theta) {
            double w = sigma(r, theta) - 1.0;
            if (w == 0.0) return 0.0;
            return w * grad_u1(r, theta).dot(h2.gradient_polar(r, theta));
        });
    }

    // Gridded sigma: Neumann datum psi from the dense operators, then a FEM
    // interior solve supplies grad u1.
    int N = std::max(N1, 1);
    NtDOperator lam_s = ntd_sigma_general(sigma, N, R, fem_opts);
    NtDOperator lam_1 = ntd_harmonic(N, R), lam_e = ntd_exterior(N, R);
    BoundaryFunction dnu(N);
    for (int n = 1; n <= N1; ++n) {
        dnu.cos_coeff(n) = n * std::pow(R, n - 1) * h1.cos_a[n - 1];
        dnu.sin_coeff(n) = n * std::pow(R, n - 1) * h1.sin_a[n - 1];
    }
    BoundaryFunction rhsf = lam_1.apply(dnu);
    BoundaryFunction rhse = lam_e.apply(dnu);
    BoundaryFunction f(N, rhsf.coeffs() - rhse.coeffs());
    BoundaryFunction psi = ntd_difference_inverse_apply(lam_s, lam_e, f);
    GriddedState state = fem_interior_state(sigma, psi, R, 2 * fem_opts.radial_cells,
                                            2 * fem_opts.angular_cells);
    return volume_integrate(grid, [&](double r, double theta) {
        double w = sigma(r, theta) - 1.0;
        if (w == 0.0) return 0.0;
        Eigen::Vector2d g = state.gradient_at(r, theta);  // Cartesian
        Eigen::Vector2d hp = h2.gradient_polar(r, theta);
        double c = std::cos(theta), s = std::sin(theta);
        Eigen::Vector2d hc{hp[0] * c - hp[1] * s, hp[0] * s + hp[1] * c};
        return w * g.dot(hc);
    });
}

double gpt_boundary_formula(const ConductivityField& sigma, int m, int n, double R,
                            const RadialSolveOptions& opts, const FemOptions& fem_opts) {
    if (m < 1 || n < 1) throw InadmissibleError("gpt_boundary_formula: orders must be >= 1");
    int N = std::max(m, n);
    NtDOperator lam_s = build_ntd(sigma, N, R, opts, fem_opts);
    NtDOperator lam_1 = ntd_harmonic(N, R), lam_e = ntd_exterior(N, R);

    BoundaryFunction dnu(N);
    dnu.cos_coeff(m) = m * std::pow(R, m - 1);
    BoundaryFunction f(N, lam_1.apply(dnu).coeffs() - lam_e.apply(dnu).coeffs());
    BoundaryFunction psi = ntd_difference_inverse_apply(lam_s, lam_e, f);
    BoundaryFunction trace = lam_s.apply(psi);

    // int h1 sigma du2/dnu ds - int dh1/dnu u2 ds with h1 = r^n cos(n theta)
    double term1 = M_PI * R * std::pow(R, n) * psi.cos_coeff(n);
    double term2 = M_PI * R * n * std::pow(R, n - 1) * trace.cos_coeff(n);
    return term1 - term2;
}

std::pair<double, double> positivity_bounds(const ConductivityField& sigma,
                                            const HarmonicCoeffs& h, double R) {
    DiskGrid grid = quadrature_grid(sigma, R, h.max_order());
    double lower = volume_integrate(grid, [&](double r, double theta) {
        double s = sigma(r, theta);
        return (s - 1.0) / s * h.gradient_polar(r, theta).squaredNorm();
    });
    double upper = volume_integrate(grid, [&](double r, double theta) {
        return (sigma(r, theta) - 1.0) * h.gradient_polar(r, theta).squaredNorm();
    });
    return {lower, upper};
}

FirstOrderPT first_order_pt(const ContractedGPTTable& table) {
    FirstOrderPT pt;
    pt.M << table.cc(1, 1), table.cs(1, 1), table.sc(1, 1), table.ss(1, 1);
    return pt;
}

}  // namespace gptlab
