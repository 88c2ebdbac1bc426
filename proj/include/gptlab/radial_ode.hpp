#pragma once

#include "gptlab/conductivity.hpp"

#include <Eigen/Dense>

namespace gptlab {

struct RadialSolveOptions {
    int cells = 2000;
    /// Solve on h and h/2 grids and extrapolate the NtD value to 4th order.
    bool richardson = true;
    double r_min_factor = 1e-6;
};

/// Solution f(r) of the mode ODE (r sigma f')' = n^2 sigma f / r with
/// f ~ c r^n at the origin, normalized to unit outer flux sigma(R) f'(R) = 1.
/// The n-th NtD diagonal entry is f(R).  Where sigma == 1 beyond the field's
/// support radius the solution continues analytically as a r^n + b r^-n.
class RadialModeSolution {
public:
    int order = 1;
    double R = 1.0;
    double support = 1.0;       // FD grid covers [r_min, support]
    Eigen::VectorXd r, f, df;   // uniform grid, finest level
    double a = 0.0, b = 0.0;    // annulus coefficients if support < R
    double ntd_value = 0.0;     // f(R), Richardson-extrapolated

    double value(double radius) const;
    double dvalue(double radius) const;
};

RadialModeSolution solve_radial_mode(const ConductivityField& sigma, int n, double R,
                                     const RadialSolveOptions& opts = {});

}  // namespace gptlab
