#include "gptlab/conductivity.hpp"

#include <algorithm>
#include <cmath>

namespace gptlab {

double RadialProfile::operator()(double r) const {
    if (nodes.empty()) throw InadmissibleError("RadialProfile: empty");
    if (r <= nodes.front()) return values.front();
    if (r >= nodes.back()) return values.back();
    auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    size_t i = it - nodes.begin();
    double t = (r - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
    return values[i - 1] * (1.0 - t) + values[i] * t;
}

RadialProfile RadialProfile::resampled(const std::vector<double>& new_nodes) const {
    RadialProfile out;
    out.nodes = new_nodes;
    out.values.reserve(new_nodes.size());
    for (double r : new_nodes) out.values.push_back((*this)(r));
    return out;
}

std::vector<double> RadialProfile::uniform_nodes(double R, int count) {
    std::vector<double> nodes(count);
    for (int i = 0; i < count; ++i) nodes[i] = R * i / (count - 1);
    return nodes;
}

ConductivityField ConductivityField::constant(double k) {
    if (k <= 0.0) throw InadmissibleError("conductivity must be positive");
    ConductivityField f;
    f.kind_ = Kind::radial;
    f.radial_ = [k](double) { return k; };
    f.lambda1_ = f.lambda2_ = k;
    f.bounds_known_ = true;
    return f;
}

ConductivityField ConductivityField::radial(std::function<double(double)> profile,
                                            double support_radius) {
    ConductivityField f;
    f.kind_ = Kind::radial;
    f.radial_ = std::move(profile);
    f.support_radius_ = support_radius;
    return f;
}

ConductivityField ConductivityField::radial(RadialProfile profile, double support_radius) {
    auto p = std::make_shared<RadialProfile>(std::move(profile));
    return radial([p](double r) { return (*p)(r); }, support_radius);
}

ConductivityField ConductivityField::gridded(std::function<double(double, double)> field,
                                             double support_radius) {
    ConductivityField f;
    f.kind_ = Kind::gridded;
    f.grid_ = std::move(field);
    f.support_radius_ = support_radius;
    return f;
}

ConductivityField ConductivityField::gridded_samples(int nr, int ntheta, double R,
                                                     std::vector<double> values) {
    if ((int)values.size() != nr * ntheta)
        throw InadmissibleError("gridded_samples: value count does not match nr*ntheta");
    auto data = std::make_shared<std::vector<double>>(std::move(values));
    auto eval = [=](double r, double theta) {
        double x = r / R * nr - 0.5;
        int i0 = (int)std::floor(x);
        double tr = x - i0;
        i0 = std::clamp(i0, 0, nr - 1);
        int i1 = std::clamp(i0 + 1, 0, nr - 1);
        if (i1 == i0) tr = 0.0;
        double y = theta / (2.0 * M_PI) * ntheta;
        int j0 = (int)std::floor(y);
        double tt = y - j0;
        j0 = ((j0 % ntheta) + ntheta) % ntheta;
        int j1 = (j0 + 1) % ntheta;
        auto& v = *data;
        double a = v[i0 * ntheta + j0] * (1 - tt) + v[i0 * ntheta + j1] * tt;
        double b = v[i1 * ntheta + j0] * (1 - tt) + v[i1 * ntheta + j1] * tt;
        return a * (1 - tr) + b * tr;
    };
    return gridded(eval);
}

std::pair<double, double> ConductivityField::bounds() const {
    if (!bounds_known_) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        double R = std::isfinite(support_radius_) ? support_radius_ : 1.0;
        const int nr = 256, nt = kind_ == Kind::gridded ? 128 : 1;
        for (int i = 0; i <= nr; ++i) {
            double r = R * i / nr;
            for (int j = 0; j < nt; ++j) {
                double v = (*this)(r, 2.0 * M_PI * j / nt);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        lambda1_ = lo;
        lambda2_ = hi;
        bounds_known_ = true;
    }
    return {lambda1_, lambda2_};
}

}  // namespace gptlab
