#include "gptlab/inversion.hpp"

#include "gptlab/threading.hpp"

#include <cmath>

namespace gptlab {

namespace {

struct RadialForward {
    std::vector<double> lambda, gpt, psi;
    std::vector<RadialModeSolution> sols;
};

RadialForward forward_radial(const ConductivityField& sigma, int order, double R,
                             const RadialSolveOptions& opts) {
    RadialForward f;
    f.lambda.resize(order);
    f.gpt.resize(order);
    f.psi.resize(order);
    f.sols.resize(order);
    parallel_for(order, [&](int i) {
        int n = i + 1;
        f.sols[i] = solve_radial_mode(sigma, n, R, opts);
        double lam = f.sols[i].ntd_value;
        f.lambda[i] = lam;
        f.gpt[i] = 2.0 * M_PI * n * std::pow(R, 2 * n) * (R / n - lam) / (R / n + lam);
        f.psi[i] = 2.0 * std::pow(R, n) / (lam + R / n);
    });
    return f;
}

/// Angular average of |grad u_n|^2 at radius r.
double radial_kernel(const RadialForward& f, int n, double r) {
    const auto& sol = f.sols[n - 1];
    double psi = f.psi[n - 1];
    if (r <= 0.0) {
        double df0 = sol.dvalue(sol.r[0]);
        return n == 1 ? psi * psi * df0 * df0 : 0.0;
    }
    double fv = sol.value(r), dfv = sol.dvalue(r);
    return 0.5 * psi * psi * (dfv * dfv + n * n * fv * fv / (r * r));
}

double functional_from(const std::vector<double>& targets, const RadialForward& f,
                       int active_order, double R, const ReconstructionConfig& cfg) {
    double S = 0.0;
    for (int n = 1; n <= active_order; ++n) {
        double d = targets[n - 1] - f.gpt[n - 1];
        S += 0.5 * cfg.weight(n, n, R) * d * d;
    }
    return S;
}

double eps_m_from(const std::vector<double>& targets, const RadialForward& f, int order) {
    double e = 0.0;
    for (int n = 1; n <= order; ++n) {
        double d = targets[n - 1] - f.gpt[n - 1];
        e += d * d;
    }
    return e;
}

double eps_sigma_radial(const RadialProfile& profile, const ConductivityField& truth, double R) {
    DiskGrid grid = DiskGrid::make(R, 48, 6, 8, profile.nodes);
    double num = volume_integrate_radial(grid, [&](double r) {
        double d = profile(r) - truth.radial_value(r);
        return d * d;
    });
    double den = volume_integrate_radial(grid, [&](double r) {
        double s = truth.radial_value(r);
        return s * s;
    });
    return num / den;
}

}  // namespace

std::vector<StageConfig> ReconstructionConfig::default_schedule(int max_order) {
    std::vector<StageConfig> stages;
    for (int l = 1; l <= max_order; ++l)
        stages.push_back({l, 12 + 10 * l, 800, 1e-10});
    return stages;
}

double ReconstructionConfig::weight(int m, int n, double R) const {
    if (weights.size() > 0) {
        if (m > weights.rows() || n > weights.cols())
            throw InadmissibleError("ReconstructionConfig: weight matrix too small");
        return weights(m - 1, n - 1);
    }
    return 1.0 / (m * n * std::pow(R, 2 * (m + n)));
}

double initial_guess(double M1, double area) {
    if (M1 >= 2.0 * area)
        throw InadmissibleError("initial_guess: M1 >= 2|B|, target outside the admissible range");
    double s0 = (2.0 * area + M1) / (2.0 * area - M1);
    if (s0 <= 0.0)
        throw InadmissibleError("initial_guess: M1 <= -2|B|, target outside the admissible range");
    return s0;
}

std::vector<double> radial_targets(const ContractedGPTTable& table) {
    int N = table.max_order();
    double scale = table.norm();
    double tol = 1e-8 * std::max(scale, 1e-300);
    for (int m = 1; m <= N; ++m) {
        for (int n = 1; n <= N; ++n) {
            if (std::abs(table.cs(m, n)) > tol || std::abs(table.sc(m, n)) > tol)
                throw InadmissibleError(
                    "radial_targets: cs/sc blocks are nonzero; targets are not radial");
            if (m != n && (std::abs(table.cc(m, n)) > tol || std::abs(table.ss(m, n)) > tol))
                throw InadmissibleError(
                    "radial_targets: off-diagonal entries are nonzero; targets are not radial");
        }
        if (std::abs(table.cc(m, m) - table.ss(m, m)) > tol)
            throw InadmissibleError("radial_targets: cc/ss diagonals differ; targets are not radial");
    }
    std::vector<double> y(N);
    for (int n = 1; n <= N; ++n) y[n - 1] = table.cc(n, n);
    return y;
}

double discrepancy_functional(const ConductivityField& sigma, const std::vector<double>& targets,
                              int active_order, double R, const ReconstructionConfig& config) {
    auto f = forward_radial(sigma, active_order, R, config.solver);
    return functional_from(targets, f, active_order, R, config);
}

void landweber_step(ReconstructionState& state, const ReconstructionConfig& config) {
    const double R = state.radius;
    const int order = state.active_order;
    ConductivityField current = ConductivityField::radial(state.profile, R);
    auto fwd = forward_radial(current, order, R, config.solver);
    double S = functional_from(state.targets, fwd, order, R, config);

    // Weighted adjoint sum, angularly averaged onto the profile nodes.
    std::vector<double> direction(state.profile.nodes.size(), 0.0);
    for (int n = 1; n <= order; ++n) {
        double wd = config.weight(n, n, R) * (state.targets[n - 1] - fwd.gpt[n - 1]);
        if (wd == 0.0) continue;
        for (size_t j = 0; j < direction.size(); ++j)
            direction[j] += wd * radial_kernel(fwd, n, state.profile.nodes[j]);
    }

    for (int attempt = 0;; ++attempt) {
        RadialProfile trial = state.profile;
        bool finite = true;
        for (size_t j = 0; j < trial.values.size(); ++j) {
            trial.values[j] += state.step * direction[j];
            if (!std::isfinite(trial.values[j])) finite = false;
            trial.values[j] = std::max(trial.values[j], config.lambda_min);
        }
        if (!finite) throw SolveError("landweber_step: non-finite update");
        auto trial_fwd =
            forward_radial(ConductivityField::radial(trial, R), order, R, config.solver);
        double S_trial = functional_from(state.targets, trial_fwd, order, R, config);
        if (S_trial <= S || attempt >= 40) {
            state.profile = std::move(trial);
            state.gpts = std::move(trial_fwd.gpt);
            state.functional = S_trial;
            state.forward_valid = true;
            break;
        }
        state.step *= 0.5;
    }
    ++state.iteration;
}

ReconstructionResult recursive_reconstruct(const ContractedGPTTable& targets, double R,
                                           const ReconstructionConfig& config,
                                           const ConductivityField* ground_truth) {
    std::vector<double> y = radial_targets(targets);
    if ((int)y.size() < config.max_order)
        throw InadmissibleError("recursive_reconstruct: targets do not reach max_order");

    auto schedule = config.schedule.empty() ? ReconstructionConfig::default_schedule(config.max_order)
                                            : config.schedule;
    for (size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i].order <= schedule[i - 1].order)
            throw InadmissibleError("recursive_reconstruct: schedule orders must increase");

    ReconstructionState state;
    state.radius = R;
    state.targets = y;
    double s0 = std::max(initial_guess(y[0], M_PI * R * R), config.lambda_min);
    state.profile.nodes = RadialProfile::uniform_nodes(R, schedule.front().radial_nodes);
    state.profile.values.assign(state.profile.nodes.size(), s0);

    ReconstructionResult result;
    for (const auto& stage : schedule) {
        if (stage.order > config.max_order) break;
        state.active_order = stage.order;
        state.step = config.step_size;
        state.profile = state.profile.resampled(RadialProfile::uniform_nodes(R, stage.radial_nodes));
        std::vector<double> eps_hist;
        for (int it = 0; it < stage.max_iter; ++it) {
            landweber_step(state, config);
            double eps_m = 0.0;
            for (int n = 1; n <= stage.order; ++n) {
                double d = y[n - 1] - state.gpts[n - 1];
                eps_m += d * d;
            }
            double eps_s = std::numeric_limits<double>::quiet_NaN();
            if (ground_truth) eps_s = eps_sigma_radial(state.profile, *ground_truth, R);
            result.history.push_back({state.iteration, stage.order, eps_m, eps_s});
            eps_hist.push_back(eps_m);
            if (eps_m < stage.tol) break;
            if (eps_hist.size() > 50 &&
                eps_hist[eps_hist.size() - 51] - eps_m < config.plateau)
                break;
        }
    }

    result.profile = state.profile;
    result.iterations = state.iteration;
    ConductivityField final_sigma = ConductivityField::radial(state.profile, R);
    auto final_fwd = forward_radial(final_sigma, config.max_order, R, RadialSolveOptions{});
    result.eps_M = 0.0;
    for (int n = 1; n <= config.max_order; ++n) {
        double d = y[n - 1] - final_fwd.gpt[n - 1];
        result.eps_M += d * d;
    }
    if (ground_truth) result.eps_sigma = eps_sigma_radial(state.profile, *ground_truth, R);
    return result;
}

std::pair<double, double> discrepancies(const ConductivityField& sigma,
                                        const std::vector<double>& targets, int N, double R,
                                        const ConductivityField* ground_truth,
                                        const RadialSolveOptions& opts) {
    auto fwd = forward_radial(sigma, N, R, opts);
    double eps_m = eps_m_from(targets, fwd, N);
    double eps_s = std::numeric_limits<double>::quiet_NaN();
    if (ground_truth) {
        DiskGrid grid = DiskGrid::make(R, 64, 6, 8);
        double num = volume_integrate_radial(grid, [&](double r) {
            double d = sigma.radial_value(r) - ground_truth->radial_value(r);
            return d * d;
        });
        double den = volume_integrate_radial(grid, [&](double r) {
            double s = ground_truth->radial_value(r);
            return s * s;
        });
        eps_s = num / den;
    }
    return {eps_m, eps_s};
}

GriddedReconstructionResult gridded_reconstruct(const ContractedGPTTable& targets, double R,
                                                const GriddedReconstructionConfig& config) {
    const int N = config.max_order;
    if (targets.max_order() < N)
        throw InadmissibleError("gridded_reconstruct: targets do not reach max_order");
    Eigen::MatrixXd y = targets.assembled().topLeftCorner(2 * N, 2 * N);
    {
        // Re-index to [cos 1..N, sin 1..N] of the reduced order.
        int Nt = targets.max_order();
        Eigen::MatrixXd full = targets.assembled();
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                y(i, j) = full(i, j);
                y(i, N + j) = full(i, Nt + j);
                y(N + i, j) = full(Nt + i, j);
                y(N + i, N + j) = full(Nt + i, Nt + j);
            }
    }

    double m1 = 0.5 * (y(0, 0) + y(N, N));
    double s0 = initial_guess(m1, M_PI * R * R);
    std::vector<double> values(config.nr * config.ntheta, std::max(s0, config.lambda_min));

    auto weight = [&](int m, int n) { return 1.0 / (m * n * std::pow(R, 2 * (m + n))); };
    auto order_of = [&](int idx) { return idx % N + 1; };

    GriddedReconstructionResult out;
    double step = config.step_size;
    for (int it = 0; it < config.max_iter; ++it) {
        ConductivityField sigma =
            ConductivityField::gridded_samples(config.nr, config.ntheta, R, values);
        NtDOperator lam_s = ntd_sigma_general(sigma, N, R, config.fem);
        Eigen::MatrixXd M = contracted_gpts(lam_s).assembled();
        Eigen::MatrixXd resid = y - M;
        out.residual_history.push_back(resid.norm());
        ++out.iterations;

        // States for all 2N basis data, sharing one factorization.
        auto mesh = std::make_shared<PolarMesh>(
            PolarMesh::make(R, config.fem.radial_cells, config.fem.angular_cells));
        FemSolver solver(sigma, mesh);
        NtDOperator lam_1 = ntd_harmonic(N, R), lam_e = ntd_exterior(N, R);
        std::vector<GriddedState> states(2 * N);
        for (int idx = 0; idx < 2 * N; ++idx) {
            int n = order_of(idx);
            BoundaryFunction dnu(N);
            double v = n * std::pow(R, n - 1);
            if (idx < N)
                dnu.cos_coeff(n) = v;
            else
                dnu.sin_coeff(n) = v;
            BoundaryFunction f(N, lam_1.apply(dnu).coeffs() - lam_e.apply(dnu).coeffs());
            BoundaryFunction psi = ntd_difference_inverse_apply(lam_s, lam_e, f);
            GriddedState st;
            st.mesh = mesh;
            st.u = solver.solve(solver.boundary_load(psi));
            st.grad = solver.gradients(st.u);
            states[idx] = std::move(st);
        }

        for (int i = 0; i < config.nr; ++i) {
            double r = (i + 0.5) * R / config.nr;
            for (int j = 0; j < config.ntheta; ++j) {
                double th = 2.0 * M_PI * j / config.ntheta;
                std::vector<Eigen::Vector2d> g(2 * N);
                for (int idx = 0; idx < 2 * N; ++idx) g[idx] = states[idx].gradient_at(r, th);
                double upd = 0.0;
                for (int a = 0; a < 2 * N; ++a)
                    for (int b = 0; b < 2 * N; ++b)
                        upd += weight(order_of(a), order_of(b)) * resid(a, b) * g[a].dot(g[b]);
                double& v = values[i * config.ntheta + j];
                v = std::max(v + step * upd, config.lambda_min);
            }
        }
    }
    out.sigma = ConductivityField::gridded_samples(config.nr, config.ntheta, R, values);
    return out;
}

}  // namespace gptlab
