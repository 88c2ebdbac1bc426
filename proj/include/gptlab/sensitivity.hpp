#pragma once

#include "gptlab/fem.hpp"
#include "gptlab/gpt.hpp"

#include <complex>
#include <map>

namespace gptlab {

/// Interior state u_n for one background mode: gradient evaluable anywhere on
/// the disk.  Radial conductivities use the spectral mode solution, gridded
/// ones a FEM solve.
class InteriorState {
public:
    static InteriorState radial(const ConductivityField& sigma, HarmonicMode mode, double R,
                                const RadialSolveOptions& opts = {});
    static InteriorState gridded(const ConductivityField& sigma, HarmonicMode mode, double R,
                                 const FemOptions& opts = {});

    HarmonicMode mode() const { return mode_; }
    /// Gradient in Cartesian components.
    Eigen::Vector2d gradient(double r, double theta) const;
    /// Boundary flux coefficient (radial case only).
    double flux_coefficient() const { return radial_ ? radial_->psi : 0.0; }

private:
    HarmonicMode mode_{1, Parity::cosine};
    std::shared_ptr<RadialTransmissionState> radial_;
    std::shared_ptr<GriddedState> fem_;
};

InteriorState interior_state(const ConductivityField& sigma, HarmonicMode mode, double R,
                             const RadialSolveOptions& opts = {}, const FemOptions& fem_opts = {});

/// Per-mode state cache for one fixed sigma; fill is single-writer, reads are
/// concurrent-safe afterwards.
class StateCache {
public:
    StateCache(const ConductivityField& sigma, double R, const RadialSolveOptions& opts = {},
               const FemOptions& fem_opts = {})
        : sigma_(sigma), R_(R), opts_(opts), fem_opts_(fem_opts) {}

    const InteriorState& state(HarmonicMode mode);
    void fill(int max_order);  // both parities up to max_order

private:
    ConductivityField sigma_;
    double R_;
    RadialSolveOptions opts_;
    FemOptions fem_opts_;
    std::map<std::pair<int, int>, InteriorState> states_;
};

/// Pointwise sensitivity kernel grad u_m . grad u_n.
std::function<double(double, double)> sensitivity_kernel(const InteriorState& um,
                                                         const InteriorState& un);

/// M'_{mn}(sigma)[gamma] = int_B gamma grad u_n . grad u_m (cosine parities by
/// default, matching the contracted cc entries).
double frechet_derivative(const ConductivityField& sigma,
                          const std::function<double(double, double)>& gamma, int m, int n,
                          double R, const RadialSolveOptions& opts = {},
                          const FemOptions& fem_opts = {});
double frechet_derivative(StateCache& cache, const DiskGrid& grid,
                          const std::function<double(double, double)>& gamma, HarmonicMode m,
                          HarmonicMode n);

/// Adjoint direction M'_{mn}(sigma)*[c] = c grad u_m . grad u_n as a field.
std::function<double(double, double)> frechet_adjoint(const ConductivityField& sigma, int m,
                                                      int n, double c, double R,
                                                      const RadialSolveOptions& opts = {});

/// Moment int_0^R int_0^2pi gamma r^{m+n-2} e^{i(m+n)theta} dtheta dr of the
/// linearized map at a constant background.
std::complex<double> linearized_perturbation_map(const std::function<double(double, double)>& gamma,
                                                 int m, int n, double R);

}  // namespace gptlab
