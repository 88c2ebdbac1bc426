#include "gptlab/radial_ode.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace gptlab;

static double benchmark_sigma(double r) {
    return (0.3 * r * r + 0.5 * r * r * r + 6.0 * std::pow(r * r - 0.5, 2) + 3.0) / 3.0;
}

TEST_CASE("homogeneous disk modes are exact") {
    for (double k : {1.0, 2.0, 0.5}) {
        auto sigma = ConductivityField::constant(k);
        for (double R : {1.0, 0.5}) {
            for (int n = 1; n <= 6; ++n) {
                auto sol = solve_radial_mode(sigma, n, R);
                CHECK(sol.ntd_value == doctest::Approx(R / (k * n)).epsilon(1e-10));
                // f = r^n / (k n R^{n-1}) up to discretization error
                double r = 0.37 * R;
                CHECK(sol.value(r) ==
                      doctest::Approx(std::pow(r, n) / (k * n * std::pow(R, n - 1)))
                          .epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("benchmark profile matches the independent finite-difference oracle") {
    auto sigma = ConductivityField::radial(benchmark_sigma);
    for (int n = 1; n <= 6; ++n) {
        double ref = oracle::mode_lambda(benchmark_sigma, n, 1.0);
        auto sol = solve_radial_mode(sigma, n, 1.0);
        CHECK(sol.ntd_value == doctest::Approx(ref).epsilon(1e-7));
    }
}

TEST_CASE("richardson extrapolation improves the NtD value") {
    auto sigma = ConductivityField::radial(benchmark_sigma);
    double ref = oracle::mode_lambda(benchmark_sigma, 3, 1.0, 80001);
    RadialSolveOptions plain{400, false, 1e-6};
    RadialSolveOptions extra{400, true, 1e-6};
    double e_plain = std::abs(solve_radial_mode(sigma, 3, 1.0, plain).ntd_value - ref);
    double e_extra = std::abs(solve_radial_mode(sigma, 3, 1.0, extra).ntd_value - ref);
    CHECK(e_extra < 0.1 * e_plain);
}

TEST_CASE("two-layer disk: closed form via the analytic annulus continuation") {
    double k = 3.0, rho = 0.6;
    auto sigma = ConductivityField::radial([k](double) { return k; }, rho);
    for (double R : {1.0, 1.5}) {
        for (int n = 1; n <= 5; ++n) {
            auto sol = solve_radial_mode(sigma, n, R);
            CHECK(sol.ntd_value ==
                  doctest::Approx(oracle::two_layer_lambda(k, rho, R, n)).epsilon(1e-9));
            // continuity across the support radius
            double eps = 1e-9;
            CHECK(sol.value(rho - eps) == doctest::Approx(sol.value(rho + eps)).epsilon(1e-5));
        }
    }
}

TEST_CASE("solution derivative is consistent with the values") {
    auto sigma = ConductivityField::radial(benchmark_sigma);
    auto sol = solve_radial_mode(sigma, 2, 1.0);
    double r = 0.55, h = 1e-5;
    double fd = (sol.value(r + h) - sol.value(r - h)) / (2.0 * h);
    CHECK(sol.dvalue(r) == doctest::Approx(fd).epsilon(1e-4));
}
