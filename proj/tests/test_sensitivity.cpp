#include "gptlab/sensitivity.hpp"

#include <doctest.h>

#include <cmath>

using namespace gptlab;

static double benchmark_sigma(double r) {
    return (0.3 * r * r + 0.5 * r * r * r + 6.0 * std::pow(r * r - 0.5, 2) + 3.0) / 3.0;
}

TEST_CASE("kernel at unit background is the closed form mn r^{m+n-2} cos((m-n)theta)") {
    auto sigma = ConductivityField::constant(1.0);
    StateCache cache(sigma, 1.0);
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 3; ++n) {
            auto kernel = sensitivity_kernel(cache.state({m, Parity::cosine}),
                                             cache.state({n, Parity::cosine}));
            for (double r : {0.2, 0.7}) {
                for (double th : {0.0, 0.4, 1.9}) {
                    double ref = m * n * std::pow(r, m + n - 2) * std::cos((m - n) * th);
                    CHECK(kernel(r, th) == doctest::Approx(ref).epsilon(1e-5));
                }
            }
        }
}

TEST_CASE("indicator perturbation of the unit disk gives pi/4") {
    auto sigma = ConductivityField::constant(1.0);
    StateCache cache(sigma, 1.0);
    DiskGrid grid = DiskGrid::make(1.0, 16, 6, 16, {0.5});
    auto gamma = [](double r, double) { return r <= 0.5 ? 1.0 : 0.0; };
    double v = frechet_derivative(cache, grid, gamma, {1, Parity::cosine}, {1, Parity::cosine});
    CHECK(v == doctest::Approx(M_PI / 4.0).epsilon(1e-10));
}

TEST_CASE("radial perturbations decouple distinct cosine orders") {
    auto sigma = ConductivityField::radial(benchmark_sigma);
    auto gamma = [](double r, double) { return 0.3 + r; };
    CHECK(std::abs(frechet_derivative(sigma, gamma, 1, 3, 1.0)) < 1e-10);
}

TEST_CASE("derivative matches central finite differences") {
    auto gamma_fn = [](double r) { return 0.2 + 0.1 * r * r; };
    double eps = 1e-4;
    for (int n : {1, 2, 4}) {
        auto sigma = ConductivityField::radial(benchmark_sigma);
        double deriv = frechet_derivative(
            sigma, [&](double r, double) { return gamma_fn(r); }, n, n, 1.0);
        auto plus = ConductivityField::radial(
            [&](double r) { return benchmark_sigma(r) + eps * gamma_fn(r); });
        auto minus = ConductivityField::radial(
            [&](double r) { return benchmark_sigma(r) - eps * gamma_fn(r); });
        double fd = (contracted_gpts(plus, n, 1.0).cc(n, n) -
                     contracted_gpts(minus, n, 1.0).cc(n, n)) /
                    (2.0 * eps);
        CHECK(deriv == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("adjoint identity <M'[gamma], c> = <gamma, M'*[c]>") {
    auto sigma = ConductivityField::radial(benchmark_sigma);
    auto gamma = [](double r, double t) { return 0.1 * r + 0.05 * std::cos(t); };
    double c = 0.7;
    int m = 2, n = 2;
    double lhs = c * frechet_derivative(sigma, gamma, m, n, 1.0);
    auto adj = frechet_adjoint(sigma, m, n, c, 1.0);
    DiskGrid grid = DiskGrid::make(1.0, 64, 6, 24);
    double rhs = volume_integrate(grid, [&](double r, double t) { return gamma(r, t) * adj(r, t); });
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

    auto zero = frechet_adjoint(sigma, m, n, 0.0, 1.0);
    CHECK(zero(0.5, 0.3) == 0.0);
}

TEST_CASE("kernel symmetry in (m, n)") {
    auto sigma = ConductivityField::radial(benchmark_sigma);
    StateCache cache(sigma, 1.0);
    auto k12 = sensitivity_kernel(cache.state({1, Parity::cosine}), cache.state({2, Parity::cosine}));
    auto k21 = sensitivity_kernel(cache.state({2, Parity::cosine}), cache.state({1, Parity::cosine}));
    CHECK(k12(0.6, 1.1) == doctest::Approx(k21(0.6, 1.1)).epsilon(1e-13));
}

TEST_CASE("linearized moment map at the constant background") {
    // gamma independent of theta: the e^{i(m+n)theta} factor integrates to 0.
    auto flat = [](double, double) { return 1.0; };
    auto z = linearized_perturbation_map(flat, 1, 1, 1.0);
    CHECK(std::abs(z) < 1e-12);
    // gamma = cos(2 theta) picks out the real part: pi * int_0^R r^{m+n-2} dr.
    auto osc = [](double, double t) { return std::cos(2.0 * t); };
    auto w = linearized_perturbation_map(osc, 1, 1, 1.0);
    CHECK(w.real() == doctest::Approx(M_PI).epsilon(1e-10));
    CHECK(std::abs(w.imag()) < 1e-10);
}
