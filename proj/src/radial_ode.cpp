#include "gptlab/radial_ode.hpp"

#include <cmath>

namespace gptlab {

namespace {

// Conservative finite-volume solve on [r_min, s] with M cells.
// Left boundary carries the regularity condition f'(r_min) = n f(r_min)/r_min,
// the right boundary the unit-flux condition r sigma f' = s.
// Fills sol.r/f/df and returns f(s).
double fd_solve(const ConductivityField& sigma, int n, double r_min, double s, int M,
                Eigen::VectorXd& rg, Eigen::VectorXd& fg, Eigen::VectorXd& dfg) {
    const double h = (s - r_min) / M;
    const int N = M + 1;
    rg.resize(N);
    for (int i = 0; i < N; ++i) rg[i] = r_min + h * i;

    Eigen::VectorXd diag(N), lower(N - 1), rhs = Eigen::VectorXd::Zero(N);
    Eigen::VectorXd cmid(M);  // r sigma at midpoints
    for (int i = 0; i < M; ++i) {
        double rm = r_min + h * (i + 0.5);
        cmid[i] = rm * sigma.radial_value(rm);
    }
    auto source = [&](int i) { return n * (double)n * sigma.radial_value(rg[i]) / rg[i]; };

    diag[0] = cmid[0] / h + n * sigma.radial_value(rg[0]) + 0.5 * h * source(0);
    for (int i = 1; i < M; ++i)
        diag[i] = (cmid[i - 1] + cmid[i]) / h + h * source(i);
    diag[M] = cmid[M - 1] / h + 0.5 * h * source(M);
    for (int i = 0; i < M; ++i) lower[i] = -cmid[i] / h;
    rhs[M] = s;  // outer flux r sigma f' = s * (sigma f')(s) = s

    // Thomas algorithm; the matrix is SPD tridiagonal.
    Eigen::VectorXd c(N), d(N);
    c[0] = lower[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for (int i = 1; i < N; ++i) {
        double m = diag[i] - lower[i - 1] * c[i - 1];
        if (m == 0.0) throw SolveError("radial mode solve: singular tridiagonal system");
        if (i < N - 1) c[i] = lower[i] / m;
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / m;
    }
    fg.resize(N);
    fg[N - 1] = d[N - 1];
    for (int i = N - 2; i >= 0; --i) fg[i] = d[i] - c[i] * fg[i + 1];

    dfg.resize(N);
    dfg[0] = n * fg[0] / rg[0];
    for (int i = 1; i < N - 1; ++i) dfg[i] = (fg[i + 1] - fg[i - 1]) / (2.0 * h);
    dfg[N - 1] = 1.0 / sigma.radial_value(s);
    return fg[N - 1];
}

}  // namespace

double RadialModeSolution::value(double radius) const {
    if (radius > support)
        return a * std::pow(radius, order) + b * std::pow(radius, -order);
    if (radius <= r[0]) return f[0] * std::pow(radius / r[0], order);
    double h = r[1] - r[0];
    int i = std::min((int)((radius - r[0]) / h), (int)r.size() - 2);
    double t = (radius - r[i]) / h;
    return f[i] * (1.0 - t) + f[i + 1] * t;
}

double RadialModeSolution::dvalue(double radius) const {
    if (radius > support)
        return order * (a * std::pow(radius, order - 1) - b * std::pow(radius, -order - 1));
    if (radius <= r[0]) return order * f[0] * std::pow(radius / r[0], order) / radius;
    double h = r[1] - r[0];
    int i = std::min((int)((radius - r[0]) / h), (int)r.size() - 2);
    double t = (radius - r[i]) / h;
    return df[i] * (1.0 - t) + df[i + 1] * t;
}

RadialModeSolution solve_radial_mode(const ConductivityField& sigma, int n, double R,
                                     const RadialSolveOptions& opts) {
    if (!sigma.is_radial()) throw InadmissibleError("solve_radial_mode: field must be radial");
    if (n < 1) throw InadmissibleError("solve_radial_mode: mode order must be >= 1");
    if (!(R > 0.0)) throw InadmissibleError("solve_radial_mode: radius must be positive");

    RadialModeSolution sol;
    sol.order = n;
    sol.R = R;
    sol.support = std::min(sigma.support_radius(), R);
    const double s = sol.support;
    const double r_min = opts.r_min_factor * R;

    auto full_solve = [&](int cells, Eigen::VectorXd& rg, Eigen::VectorXd& fg,
                          Eigen::VectorXd& dfg, double& a_out, double& b_out) {
        double fs = fd_solve(sigma, n, r_min, s, cells, rg, fg, dfg);
        if (s < R) {
            // sigma == 1 on (s, R]: continue as a r^n + b r^-n, matching the
            // trace and the (continuous) flux sigma f'(s-) = f'(s+) = 1.
            double sn = std::pow(s, n);
            double av = (fs + s / n) / (2.0 * sn);
            double bv = (fs - s / n) * sn / 2.0;
            double q = n * (av * std::pow(R, n - 1) - bv * std::pow(R, -n - 1));
            if (!std::isfinite(q) || q == 0.0)
                throw SolveError("radial mode solve: annulus continuation failed at mode " +
                                 std::to_string(n));
            fg /= q;
            dfg /= q;
            a_out = av / q;
            b_out = bv / q;
            return (a_out * std::pow(R, n) + b_out * std::pow(R, -n));
        }
        a_out = b_out = 0.0;
        return fs;
    };

    double lam_fine;
    if (opts.richardson) {
        Eigen::VectorXd rc, fc, dfc;
        double ac, bc;
        double lam_coarse = full_solve(opts.cells, rc, fc, dfc, ac, bc);
        lam_fine = full_solve(2 * opts.cells, sol.r, sol.f, sol.df, sol.a, sol.b);
        sol.ntd_value = (4.0 * lam_fine - lam_coarse) / 3.0;
    } else {
        lam_fine = full_solve(opts.cells, sol.r, sol.f, sol.df, sol.a, sol.b);
        sol.ntd_value = lam_fine;
    }
    if (!std::isfinite(sol.ntd_value))
        throw SolveError("radial mode solve: non-finite NtD value at mode " + std::to_string(n));
    return sol;
}

}  // namespace gptlab
