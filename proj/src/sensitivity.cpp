#include "gptlab/sensitivity.hpp"

#include <cmath>

namespace gptlab {

InteriorState InteriorState::radial(const ConductivityField& sigma, HarmonicMode mode, double R,
                                    const RadialSolveOptions& opts) {
    InteriorState st;
    st.mode_ = mode;
    st.radial_ = std::make_shared<RadialTransmissionState>(
        radial_transmission_state(sigma, mode.order, R, opts));
    return st;
}

InteriorState InteriorState::gridded(const ConductivityField& sigma, HarmonicMode mode, double R,
                                     const FemOptions& opts) {
    int N = mode.order;
    NtDOperator lam_s = ntd_sigma_general(sigma, N, R, opts);
    NtDOperator lam_1 = ntd_harmonic(N, R), lam_e = ntd_exterior(N, R);
    BoundaryFunction dnu = harmonic_normal_derivative(mode, R, N);
    BoundaryFunction f(N, lam_1.apply(dnu).coeffs() - lam_e.apply(dnu).coeffs());
    BoundaryFunction psi = ntd_difference_inverse_apply(lam_s, lam_e, f);
    InteriorState st;
    st.mode_ = mode;
    st.fem_ = std::make_shared<GriddedState>(
        fem_interior_state(sigma, psi, R, 2 * opts.radial_cells, 2 * opts.angular_cells));
    return st;
}

Eigen::Vector2d InteriorState::gradient(double r, double theta) const {
    if (radial_) {
        int n = mode_.order;
        double f = radial_->sol.value(r), df = radial_->sol.dvalue(r);
        double c = std::cos(n * theta), s = std::sin(n * theta);
        double gr, gt;  // polar components
        if (mode_.parity == Parity::cosine) {
            gr = radial_->psi * df * c;
            gt = -radial_->psi * (r > 0 ? n * f / r : df * (n == 1 ? 1.0 : 0.0)) * s;
        } else {
            gr = radial_->psi * df * s;
            gt = radial_->psi * (r > 0 ? n * f / r : df * (n == 1 ? 1.0 : 0.0)) * c;
        }
        double ct = std::cos(theta), st_ = std::sin(theta);
        return {gr * ct - gt * st_, gr * st_ + gt * ct};
    }
    return fem_->gradient_at(r, theta);
}

InteriorState interior_state(const ConductivityField& sigma, HarmonicMode mode, double R,
                             const RadialSolveOptions& opts, const FemOptions& fem_opts) {
    if (mode.order < 1) throw InadmissibleError("interior_state: mode order must be >= 1");
    return sigma.is_radial() ? InteriorState::radial(sigma, mode, R, opts)
                             : InteriorState::gridded(sigma, mode, R, fem_opts);
}

const InteriorState& StateCache::state(HarmonicMode mode) {
    auto key = std::make_pair(mode.order, (int)mode.parity);
    auto it = states_.find(key);
    if (it == states_.end())
        it = states_.emplace(key, interior_state(sigma_, mode, R_, opts_, fem_opts_)).first;
    return it->second;
}

void StateCache::fill(int max_order) {
    for (int n = 1; n <= max_order; ++n) {
        state({n, Parity::cosine});
        state({n, Parity::sine});
    }
}

std::function<double(double, double)> sensitivity_kernel(const InteriorState& um,
                                                         const InteriorState& un) {
    return [um, un](double r, double theta) {
        return um.gradient(r, theta).dot(un.gradient(r, theta));
    };
}

double frechet_derivative(StateCache& cache, const DiskGrid& grid,
                          const std::function<double(double, double)>& gamma, HarmonicMode m,
                          HarmonicMode n) {
    auto kernel = sensitivity_kernel(cache.state(m), cache.state(n));
    return volume_integrate(grid,
                            [&](double r, double t) { return gamma(r, t) * kernel(r, t); });
}

double frechet_derivative(const ConductivityField& sigma,
                          const std::function<double(double, double)>& gamma, int m, int n,
                          double R, const RadialSolveOptions& opts, const FemOptions& fem_opts) {
    StateCache cache(sigma, R, opts, fem_opts);
    std::vector<double> breaks;
    if (sigma.support_radius() < R) breaks.push_back(sigma.support_radius());
    DiskGrid grid = DiskGrid::make(R, 64, 6, std::max(8, 2 * std::max(m, n) + 2), breaks);
    return frechet_derivative(cache, grid, gamma, {m, Parity::cosine}, {n, Parity::cosine});
}

std::function<double(double, double)> frechet_adjoint(const ConductivityField& sigma, int m,
                                                      int n, double c, double R,
                                                      const RadialSolveOptions& opts) {
    if (c == 0.0) return [](double, double) { return 0.0; };
    auto um = interior_state(sigma, {m, Parity::cosine}, R, opts);
    auto un = interior_state(sigma, {n, Parity::cosine}, R, opts);
    auto kernel = sensitivity_kernel(um, un);
    return [c, kernel](double r, double theta) { return c * kernel(r, theta); };
}

std::complex<double> linearized_perturbation_map(const std::function<double(double, double)>& gamma,
                                                 int m, int n, double R) {
    if (m < 1 || n < 1) throw InadmissibleError("linearized_perturbation_map: orders >= 1");
    // Note the measure dtheta dr (no Jacobian): this is the raw moment the
    // contracted GPTs control in the linearized regime.
    DiskGrid grid = DiskGrid::make(R, 64, 6, std::max(8, m + n + 2));
    std::complex<double> total = 0.0;
    int p = m + n;
    for (int i = 0; i < grid.r_nodes.size(); ++i) {
        double r = grid.r_nodes[i];
        double w = grid.r_weights[i] / r;  // undo the Jacobian
        std::complex<double> ring = 0.0;
        for (int j = 0; j < grid.theta_nodes.size(); ++j) {
            double t = grid.theta_nodes[j];
            ring += gamma(r, t) * std::exp(std::complex<double>(0.0, p * t));
        }
        total += w * grid.theta_weight * std::pow(r, p - 2) * ring;
    }
    return total;
}

}  // namespace gptlab
