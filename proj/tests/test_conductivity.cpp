#include "gptlab/conductivity.hpp"

#include <doctest.h>

#include <cmath>

using namespace gptlab;

TEST_CASE("radial profile interpolation and clamping") {
    RadialProfile p{{0.0, 0.5, 1.0}, {2.0, 3.0, 1.0}};
    CHECK(p(0.25) == doctest::Approx(2.5));
    CHECK(p(0.75) == doctest::Approx(2.0));
    CHECK(p(-1.0) == doctest::Approx(2.0));
    CHECK(p(2.0) == doctest::Approx(1.0));

    RadialProfile q = p.resampled(RadialProfile::uniform_nodes(1.0, 5));
    CHECK(q.nodes.size() == 5);
    CHECK(q(0.25) == doctest::Approx(2.5));
}

TEST_CASE("support radius truncates the field to 1") {
    auto sigma = ConductivityField::radial([](double) { return 4.0; }, 0.5);
    CHECK(sigma(0.3, 1.0) == doctest::Approx(4.0));
    CHECK(sigma(0.7, 1.0) == doctest::Approx(1.0));
    CHECK(sigma.radial_value(0.7) == doctest::Approx(1.0));
    CHECK(sigma.is_radial());
}

TEST_CASE("gridded samples interpolate their own nodes and wrap in theta") {
    int nr = 4, ntheta = 8;
    double R = 1.0;
    std::vector<double> values(nr * ntheta);
    auto fn = [&](double r, double t) { return 1.5 + 0.3 * r * std::cos(t); };
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ntheta; ++j) {
            double r = (i + 0.5) * R / nr, t = 2.0 * M_PI * j / ntheta;
            values[i * ntheta + j] = fn(r, t);
        }
    auto sigma = ConductivityField::gridded_samples(nr, ntheta, R, values);
    CHECK_FALSE(sigma.is_radial());
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ntheta; ++j) {
            double r = (i + 0.5) * R / nr, t = 2.0 * M_PI * j / ntheta;
            CHECK(sigma(r, t) == doctest::Approx(fn(r, t)).epsilon(1e-13));
        }
    CHECK(sigma(0.6, 0.1) == doctest::Approx(sigma(0.6, 0.1 + 2.0 * M_PI)).epsilon(1e-13));
}

TEST_CASE("bounds bracket the field") {
    auto sigma = ConductivityField::radial([](double r) { return 1.0 + r * r; });
    auto [lo, hi] = sigma.bounds();
    CHECK(lo <= 1.0 + 1e-6);
    CHECK(hi >= 2.0 - 1e-3);
    sigma.set_bounds(0.5, 3.0);
    CHECK(sigma.bounds().first == 0.5);
}
