#include "gptlab/inversion.hpp"

#include <doctest.h>

#include <cmath>

using namespace gptlab;

static double benchmark_sigma(double r) {
    return (0.3 * r * r + 0.5 * r * r * r + 6.0 * std::pow(r * r - 0.5, 2) + 3.0) / 3.0;
}

TEST_CASE("initial guess inverts the homogeneous-disk GPT") {
    double M1 = gpt_homogeneous_disk(2.0, 1.0, 1);
    CHECK(initial_guess(M1, M_PI) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(initial_guess(2.0 * M_PI, M_PI), InadmissibleError);
    CHECK_THROWS_AS(initial_guess(-2.0 * M_PI, M_PI), InadmissibleError);
}

TEST_CASE("radial target extraction validates structure") {
    auto table = contracted_gpts(ConductivityField::radial(benchmark_sigma), 3, 1.0);
    auto y = radial_targets(table);
    REQUIRE(y.size() == 3);
    CHECK(y[0] == doctest::Approx(table.cc(1, 1)));

    auto bad = table;
    bad.block_cs()(0, 1) = 0.5;
    CHECK_THROWS_AS(radial_targets(bad), InadmissibleError);
    auto bad2 = table;
    bad2.block_cc()(0, 2) = 0.5;
    CHECK_THROWS_AS(radial_targets(bad2), InadmissibleError);
}

TEST_CASE("default weights normalize pair magnitudes") {
    ReconstructionConfig config;
    CHECK(config.weight(2, 3, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(config.weight(1, 1, 2.0) == doctest::Approx(std::pow(2.0, -4)).epsilon(1e-14));
}

TEST_CASE("landweber step is the identity at zero residual") {
    ReconstructionConfig config;
    ReconstructionState state;
    state.radius = 1.0;
    state.active_order = 2;
    state.profile.nodes = RadialProfile::uniform_nodes(1.0, 9);
    state.profile.values.assign(9, 1.7);
    state.targets = {0.0, 0.0};
    state.step = config.step_size;
    landweber_step(state, config);
    state.targets = state.gpts;  // exact data for the current iterate
    auto frozen = state.profile.values;
    landweber_step(state, config);
    for (size_t i = 0; i < frozen.size(); ++i) CHECK(state.profile.values[i] == frozen[i]);
}

TEST_CASE("functional descends over the first 100 benchmark iterations") {
    auto truth = ConductivityField::radial(benchmark_sigma);
    auto table = contracted_gpts(truth, 3, 1.0);
    ReconstructionConfig config;
    ReconstructionState state;
    state.radius = 1.0;
    state.active_order = 3;
    state.targets = radial_targets(table);
    state.step = config.step_size;
    state.profile.nodes = RadialProfile::uniform_nodes(1.0, 30);
    state.profile.values.assign(30, initial_guess(state.targets[0], M_PI));
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 100; ++k) {
        landweber_step(state, config);
        CHECK(state.functional <= prev);
        prev = state.functional;
    }
}

TEST_CASE("homogeneous disk is recovered by the initial guess") {
    auto table = contracted_gpts(ConductivityField::constant(2.0), 1, 1.0);
    ReconstructionConfig config;
    config.max_order = 1;
    auto truth = ConductivityField::constant(2.0);
    auto result = recursive_reconstruct(table, 1.0, config, &truth);
    CHECK(result.eps_M < 1e-12);
    for (double v : result.profile.values) CHECK(v == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("more orders give a better benchmark reconstruction") {
    auto truth = ConductivityField::radial(benchmark_sigma);
    auto table = contracted_gpts(truth, 6, 1.0);
    ReconstructionConfig c2, c6;
    c2.max_order = 2;
    c6.max_order = 6;
    double e2 = recursive_reconstruct(table, 1.0, c2, &truth).eps_sigma;
    double e6 = recursive_reconstruct(table, 1.0, c6, &truth).eps_sigma;
    CHECK(e6 <= e2);
}

TEST_CASE("iterates stay radial and clamp at lambda_min") {
    auto table = contracted_gpts(ConductivityField::constant(0.5), 2, 1.0);
    ReconstructionConfig config;
    config.max_order = 2;
    config.schedule = {{1, 10, 20, 1e-12}, {2, 10, 20, 1e-12}};
    auto result = recursive_reconstruct(table, 1.0, config);
    for (double v : result.profile.values) CHECK(v >= config.lambda_min);
}

TEST_CASE("schedule orders must increase") {
    auto table = contracted_gpts(ConductivityField::constant(2.0), 2, 1.0);
    ReconstructionConfig config;
    config.max_order = 2;
    config.schedule = {{2, 10, 5, 1e-12}, {1, 10, 5, 1e-12}};
    CHECK_THROWS_AS(recursive_reconstruct(table, 1.0, config), InadmissibleError);
}

TEST_CASE("discrepancies report the stated scalars") {
    auto truth = ConductivityField::radial(benchmark_sigma);
    auto table = contracted_gpts(truth, 2, 1.0);
    auto y = radial_targets(table);
    auto [em, es] = discrepancies(truth, y, 2, 1.0, &truth);
    CHECK(em < 1e-15);
    CHECK(es < 1e-15);

    auto scaled = ConductivityField::radial([](double r) { return 1.01 * benchmark_sigma(r); });
    auto [em2, es2] = discrepancies(scaled, y, 2, 1.0, &truth);
    CHECK(es2 == doctest::Approx(1e-4).epsilon(1e-3));
    CHECK(em2 > 0.0);

    auto one = ConductivityField::constant(1.0);
    auto yk = radial_targets(contracted_gpts(ConductivityField::constant(2.0), 1, 1.0));
    auto [em3, es3] = discrepancies(one, yk, 1, 1.0);
    CHECK(em3 == doctest::Approx(std::pow(2.0 * M_PI / 3.0, 2)).epsilon(1e-8));
    CHECK(std::isnan(es3));
}

TEST_CASE("gridded reconstruction moves toward a homogeneous target") {
    auto table = contracted_gpts(ConductivityField::constant(1.5), 1, 1.0);
    GriddedReconstructionConfig config;
    config.max_order = 1;
    config.nr = 6;
    config.ntheta = 24;
    config.max_iter = 8;
    config.fem = FemOptions{16, 64, false};
    auto result = gridded_reconstruct(table, 1.0, config);
    REQUIRE(result.residual_history.size() == 8);
    CHECK(result.residual_history.back() < 0.5 * result.residual_history.front());
    DiskGrid grid = DiskGrid::make(1.0, 16, 4, 16);
    double mean = volume_integrate(grid, [&](double r, double t) { return result.sigma(r, t); }) /
                  grid.area();
    CHECK(mean == doctest::Approx(1.5).epsilon(0.1));
}
