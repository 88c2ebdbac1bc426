#include "gptlab/expression.hpp"
#include "gptlab/gptfile.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace gptlab;

TEST_CASE("gpt file round trip is bit exact") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    GPTFile file;
    file.radius = 1.25;
    file.table = ContractedGPTTable(4);
    for (auto* b : {&file.table.block_cc(), &file.table.block_cs(), &file.table.block_sc(),
                    &file.table.block_ss()})
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) (*b)(i, j) = dist(rng) * std::pow(10.0, i - j);

    std::stringstream ss;
    file.write(ss);
    GPTFile back = GPTFile::read(ss);
    CHECK(back.radius == file.radius);
    REQUIRE(back.table.max_order() == 4);
    CHECK((back.table.assembled().array() == file.table.assembled().array()).all());
}

TEST_CASE("malformed gpt files are rejected") {
    auto reject = [](const std::string& text) {
        std::stringstream ss(text);
        CHECK_THROWS_AS(GPTFile::read(ss), InadmissibleError);
    };
    reject("");
    reject("bogus,1\norder,2\nradius,1\n");
    reject("gptlab-gpt-version,1\norder,0\nradius,1\n");
    reject("gptlab-gpt-version,1\norder,1\nradius,1\nnot-a-number\n0\n0\n0\n");
    reject("gptlab-gpt-version,1\norder,2\nradius,1\n1,2\n3\n");  // short row
    reject("gptlab-gpt-version,2\norder,1\nradius,1\n0\n0\n0\n0\n");
}

TEST_CASE("expression grammar: precedence, associativity, constants") {
    auto at = [](const std::string& e, double r = 0.0, double t = 0.0) {
        return parse_expression(e)(r, t);
    };
    CHECK(at("2+3*4^2") == doctest::Approx(50.0));
    CHECK(at("2^3^2") == doctest::Approx(512.0));
    CHECK(at("-2^2") == doctest::Approx(-4.0));
    CHECK(at("(2+3)*4") == doctest::Approx(20.0));
    CHECK(at("pi") == doctest::Approx(M_PI));
    CHECK(at("r*cos(theta)", 2.0, M_PI / 3) == doctest::Approx(1.0));
    CHECK(at("sqrt(abs(-9))") == doctest::Approx(3.0));
    CHECK(at("exp(log(5))") == doctest::Approx(5.0));
}

TEST_CASE("expression grammar: benchmark profile evaluates correctly") {
    auto f = parse_expression("(0.3*r^2+0.5*r^3+6*(r^2-0.5)^2+3.0)/3.0");
    for (double r : {0.0, 0.3, 0.7, 1.0}) {
        double ref = (0.3 * r * r + 0.5 * r * r * r + 6.0 * std::pow(r * r - 0.5, 2) + 3.0) / 3.0;
        CHECK(f(r, 0.0) == doctest::Approx(ref).epsilon(1e-15));
    }
}

TEST_CASE("expression grammar: errors") {
    CHECK_THROWS_AS(parse_expression("2+"), InadmissibleError);
    CHECK_THROWS_AS(parse_expression("bogus(3)"), InadmissibleError);
    CHECK_THROWS_AS(parse_expression("sin 3"), InadmissibleError);
    CHECK_THROWS_AS(parse_expression("(1+2"), InadmissibleError);
    CHECK_THROWS_AS(parse_expression("1 2"), InadmissibleError);
}
