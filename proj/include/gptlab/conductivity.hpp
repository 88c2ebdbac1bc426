#pragma once

#include "gptlab/basis.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace gptlab {

/// Piecewise-linear radial profile on increasing nodes starting at 0.
/// Evaluation clamps outside the node range.
struct RadialProfile {
    std::vector<double> nodes;
    std::vector<double> values;

    double operator()(double r) const;
    /// Linear interpolation of this profile onto a new node set.
    RadialProfile resampled(const std::vector<double>& new_nodes) const;
    static std::vector<double> uniform_nodes(double R, int count);
};

/// Conductivity distribution sigma on the disk.  Either a radial profile
/// sigma(r) or a gridded (r, theta)-dependent field; sigma == 1 outside the
/// support radius.  Bounds lambda1 <= sigma <= lambda2 are sampled estimates
/// unless provided.
class ConductivityField {
public:
    enum class Kind { radial, gridded };

    static ConductivityField constant(double k);
    static ConductivityField radial(std::function<double(double)> profile,
                                    double support_radius = std::numeric_limits<double>::infinity());
    static ConductivityField radial(RadialProfile profile,
                                    double support_radius = std::numeric_limits<double>::infinity());
    static ConductivityField gridded(std::function<double(double, double)> field,
                                     double support_radius = std::numeric_limits<double>::infinity());
    /// Bilinear interpolation of samples at cell centers r_i = (i+1/2)R/nr,
    /// theta_j = 2 pi j/ntheta (values in row-major r x theta order,
    /// periodic in theta, constant extrapolation in r).
    static ConductivityField gridded_samples(int nr, int ntheta, double R,
                                             std::vector<double> values);

    Kind kind() const { return kind_; }
    bool is_radial() const { return kind_ == Kind::radial; }
    double support_radius() const { return support_radius_; }

    double operator()(double r, double theta) const {
        if (r > support_radius_) return 1.0;
        return kind_ == Kind::radial ? radial_(r) : grid_(r, theta);
    }
    double radial_value(double r) const {
        if (r > support_radius_) return 1.0;
        return radial_(r);
    }

    /// Lower/upper bounds (lambda1, lambda2), estimated by sampling when not
    /// set explicitly.
    std::pair<double, double> bounds() const;
    void set_bounds(double lambda1, double lambda2) { lambda1_ = lambda1; lambda2_ = lambda2; }

private:
    Kind kind_ = Kind::radial;
    std::function<double(double)> radial_;
    std::function<double(double, double)> grid_;
    double support_radius_ = std::numeric_limits<double>::infinity();
    mutable double lambda1_ = 0.0, lambda2_ = 0.0;
    mutable bool bounds_known_ = false;
};

}  // namespace gptlab
