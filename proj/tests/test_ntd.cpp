#include "gptlab/ntd.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gptlab;

TEST_CASE("harmonic and exterior NtD maps are the diagonal closed forms") {
    double R = 1.3;
    NtDOperator lam1 = ntd_harmonic(4, R), lame = ntd_exterior(4, R);
    for (int n = 1; n <= 4; ++n) {
        CHECK(lam1.diag_entry(n) == doctest::Approx(R / n).epsilon(1e-14));
        CHECK(lame.diag_entry(n) == doctest::Approx(-R / n).epsilon(1e-14));
    }
    CHECK(lam1.is_diagonal());
    CHECK(lam1.symmetry_defect() < 1e-15);

    BoundaryFunction g(4);
    g.cos_coeff(2) = 2.0;
    g.sin_coeff(3) = -1.0;
    BoundaryFunction out = lam1.apply(g);
    CHECK(out.cos_coeff(2) == doctest::Approx(2.0 * R / 2).epsilon(1e-14));
    CHECK(out.sin_coeff(3) == doctest::Approx(-1.0 * R / 3).epsilon(1e-14));
    CHECK((lam1.matrix() * g.coeffs() - out.coeffs()).norm() < 1e-14);
}

TEST_CASE("spectral NtD for constant conductivity") {
    auto sigma = ConductivityField::constant(2.5);
    for (int n = 1; n <= 5; ++n)
        CHECK(ntd_sigma_radial(sigma, n, 1.0) == doctest::Approx(1.0 / (2.5 * n)).epsilon(1e-10));
    NtDOperator op = build_ntd(sigma, 5, 1.0);
    CHECK(op.is_diagonal());
}

TEST_CASE("FEM NtD: constant conductivity, symmetry, agreement with spectral") {
    auto sigma_c = ConductivityField::gridded([](double, double) { return 2.0; });
    NtDOperator fem = ntd_sigma_general(sigma_c, 3, 1.0);
    CHECK_FALSE(fem.is_diagonal());
    CHECK(fem.symmetry_defect() < 1e-12);
    Eigen::MatrixXd m = fem.matrix();
    for (int n = 1; n <= 3; ++n) {
        CHECK(m(n - 1, n - 1) == doctest::Approx(1.0 / (2.0 * n)).epsilon(1e-6));
        CHECK(m(3 + n - 1, 3 + n - 1) == doctest::Approx(1.0 / (2.0 * n)).epsilon(1e-6));
    }

    auto radial_fn = [](double r) { return 1.0 + r * r; };
    auto sigma_r = ConductivityField::radial(radial_fn);
    auto sigma_g = ConductivityField::gridded([&](double r, double) { return radial_fn(r); });
    NtDOperator spec = build_ntd(sigma_r, 3, 1.0);
    Eigen::MatrixXd femr = ntd_sigma_general(sigma_g, 3, 1.0).matrix();
    for (int n = 1; n <= 3; ++n)
        CHECK(femr(n - 1, n - 1) == doctest::Approx(spec.diag_entry(n)).epsilon(1e-5));
}

TEST_CASE("difference inverse: direct and landweber routes agree") {
    auto sigma = ConductivityField::constant(3.0);
    NtDOperator lams = build_ntd(sigma, 4, 1.0);
    NtDOperator lame = ntd_exterior(4, 1.0);
    BoundaryFunction f(4);
    f.cos_coeff(1) = 1.0;
    f.sin_coeff(4) = 0.25;
    BoundaryFunction g = ntd_difference_inverse_apply(lams, lame, f);
    BoundaryFunction back(4, lams.apply(g).coeffs() - lame.apply(g).coeffs());
    CHECK((back.coeffs() - f.coeffs()).norm() < 1e-12);

    auto lw = ntd_difference_inverse_landweber(lams, lame, f, 0.5, 1e-12, 10000);
    CHECK(lw.converged);
    CHECK((lw.g.coeffs() - g.coeffs()).norm() < 1e-8);
}

TEST_CASE("difference inverse rejects the singular homogeneous case") {
    // Lambda_1 - Lambda_1 = 0 is singular.
    NtDOperator lam1 = ntd_harmonic(3, 1.0);
    BoundaryFunction f(3);
    f.cos_coeff(1) = 1.0;
    CHECK_THROWS_AS(ntd_difference_inverse_apply(lam1, lam1, f), SolveError);
    auto stalled = ntd_difference_inverse_landweber(lam1, lam1, f, 0.5, 1e-12, 50);
    CHECK_FALSE(stalled.converged);
}
