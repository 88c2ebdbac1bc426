#include "gptlab/basis.hpp"

#include <doctest.h>

#include <cmath>

using namespace gptlab;

TEST_CASE("gauss_legendre integrates polynomials of maximal degree") {
    Eigen::VectorXd x, w;
    gauss_legendre(5, x, w);
    CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
    double s8 = 0.0, s9 = 0.0;
    for (int i = 0; i < 5; ++i) {
        s8 += w[i] * std::pow(x[i], 8);
        s9 += w[i] * std::pow(x[i], 9);
    }
    CHECK(s8 == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(std::abs(s9) < 1e-15);
}

TEST_CASE("disk quadrature: areas and moments") {
    for (double R : {0.5, 1.0, 2.0}) {
        DiskGrid grid = DiskGrid::make(R, 8, 4, 8);
        CHECK(volume_integrate_radial(grid, [](double) { return 1.0; }) ==
              doctest::Approx(M_PI * R * R).epsilon(1e-13));
        CHECK(volume_integrate_radial(grid, [](double r) { return r * r; }) ==
              doctest::Approx(M_PI * std::pow(R, 4) / 2.0).epsilon(1e-13));
        CHECK(volume_integrate(grid, [](double r, double t) {
                  return r * r * std::cos(t) * std::cos(t);
              }) == doctest::Approx(M_PI * std::pow(R, 4) / 4.0).epsilon(1e-13));
    }
}

TEST_CASE("disk quadrature: breakpoints make indicators exact") {
    DiskGrid grid = DiskGrid::make(1.0, 8, 4, 8, {0.5});
    double v = volume_integrate_radial(grid, [](double r) { return r <= 0.5 ? 1.0 : 0.0; });
    CHECK(v == doctest::Approx(M_PI / 4.0).epsilon(1e-13));
}

TEST_CASE("boundary function evaluation and harmonic traces") {
    BoundaryFunction g(3);
    g.cos_coeff(2) = 1.5;
    g.sin_coeff(1) = -0.5;
    double th = 0.7;
    CHECK(g.evaluate(th) ==
          doctest::Approx(1.5 * std::cos(2 * th) - 0.5 * std::sin(th)).epsilon(1e-14));

    double R = 0.8;
    BoundaryFunction tr = harmonic_trace({3, Parity::cosine}, R, 5);
    CHECK(tr.cos_coeff(3) == doctest::Approx(std::pow(R, 3)).epsilon(1e-14));
    CHECK(tr.sin_coeff(3) == 0.0);
    BoundaryFunction dn = harmonic_normal_derivative({3, Parity::sine}, R, 5);
    CHECK(dn.sin_coeff(3) == doctest::Approx(3.0 * std::pow(R, 2)).epsilon(1e-14));
}

TEST_CASE("invalid boundary function sizes are rejected") {
    CHECK_THROWS_AS(BoundaryFunction(0), InadmissibleError);
    CHECK_THROWS_AS(BoundaryFunction(2, Eigen::VectorXd::Zero(3)), InadmissibleError);
}
