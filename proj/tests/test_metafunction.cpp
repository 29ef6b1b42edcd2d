#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gsa/metafunction.hpp"
#include "gsa/sampling.hpp"

using namespace gsa;

TEST(Univariate, SpotValues) {
    EXPECT_DOUBLE_EQ(univariate(FunctionId::exponential, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(univariate(FunctionId::periodic, 0.25), 0.5);
    EXPECT_NEAR(univariate(FunctionId::inverse, 0.9), 0.11, 1e-15);
    EXPECT_EQ(univariate(FunctionId::discontinuous, 0.49), 0.0);
    EXPECT_EQ(univariate(FunctionId::discontinuous, 0.5), 1.0);
    EXPECT_EQ(univariate(FunctionId::no_effect, 0.3), 0.0);
    EXPECT_DOUBLE_EQ(univariate(FunctionId::non_monotonic, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(univariate(FunctionId::trigonometric, 0.0), 1.0);
}

TEST(Interactions, EnumerationOrder) {
    const auto p = enumerate_pairs(4);
    ASSERT_EQ(p.size(), 6u);
    const std::array<std::uint32_t, 2> want[] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (std::size_t r = 0; r < 6; ++r) EXPECT_EQ(p[r], want[r]);
    const auto t = enumerate_triples(4);
    ASSERT_EQ(t.size(), 4u);
    EXPECT_EQ(t[0], (std::array<std::uint32_t, 3>{0, 1, 2}));
    EXPECT_EQ(enumerate_triples(10).size(), 120u);
}

TEST(Interactions, ActiveCounts) {
    const auto spec = generate_spec(4, 0.5, 0.25, 3);
    EXPECT_EQ(spec.pairs.size(), 3u);
    EXPECT_EQ(spec.triples.size(), 1u);
    const auto big = generate_spec(20, 0.3, 0.1, 5);
    EXPECT_EQ(big.pairs.size(), 57u);   // ceil(0.3 * 190)
    EXPECT_EQ(big.triples.size(), 114u); // ceil(0.1 * 1140)
    EXPECT_EQ(big.alpha.size(), 20u);
    EXPECT_EQ(big.beta.size(), big.pairs.size());
    EXPECT_EQ(big.gamma.size(), big.triples.size());
}

TEST(Generate, Deterministic) {
    EXPECT_EQ(generate_spec(30, 0.4, 0.2, 17), generate_spec(30, 0.4, 0.2, 17));
    EXPECT_NE(generate_spec(30, 0.4, 0.2, 17), generate_spec(30, 0.4, 0.2, 18));
}

TEST(Generate, CoefficientMixture) {
    // 0.3 N(0, 5) + 0.7 N(0, 0.5): variance 0.3 * 25 + 0.7 * 0.25 = 7.675.
    std::vector<double> c;
    for (std::uint64_t eps = 1; eps <= 200; ++eps) {
        const auto s = generate_spec(100, 0.3, 0.1, eps);
        c.insert(c.end(), s.alpha.begin(), s.alpha.end());
    }
    double m = 0.0, v = 0.0;
    for (double x : c) m += x;
    m /= c.size();
    for (double x : c) v += (x - m) * (x - m);
    v /= c.size();
    EXPECT_NEAR(m, 0.0, 0.05);
    EXPECT_NEAR(v, 7.675, 0.4);
}

TEST(Evaluate, NullFunction) {
    auto spec = generate_spec(5, 0.5, 0.3, 2);
    std::fill(spec.alpha.begin(), spec.alpha.end(), 0.0);
    std::fill(spec.beta.begin(), spec.beta.end(), 0.0);
    std::fill(spec.gamma.begin(), spec.gamma.end(), 0.0);
    for (double y : evaluate(spec, random_points(20, 5, 1))) EXPECT_EQ(y, 0.0);
}

TEST(Evaluate, SingleLinearTerm) {
    MetafunctionSpec spec;
    spec.k = 3;
    spec.u = {FunctionId::linear, FunctionId::cubic, FunctionId::quadratic};
    spec.alpha = {1.0, 0.0, 0.0};
    const auto m = random_points(10, 3, 4);
    const auto y = evaluate(spec, m);
    for (std::size_t r = 0; r < 10; ++r) EXPECT_EQ(y[r], m(r, 0));
}

// Hand expansion of a fixed k = 4 function.
TEST(Evaluate, HandExpansion) {
    MetafunctionSpec spec;
    spec.k = 4;
    spec.u = {FunctionId::cubic, FunctionId::exponential, FunctionId::periodic, FunctionId::inverse};
    spec.alpha = {0.7, -1.3, 2.1, 0.4};
    spec.pairs = {{0, 1}, {1, 3}};
    spec.beta = {1.5, -0.6};
    spec.triples = {{0, 2, 3}};
    spec.gamma = {3.2};

    const double x[4] = {0.31, 0.77, 0.12, 0.58};
    const double e = std::numbers::e;
    const double g1 = x[0] * x[0] * x[0];
    const double g2 = (std::exp(x[1]) - 1.0) / (e - 1.0);
    const double g3 = std::sin(2.0 * std::numbers::pi * x[2]) / 2.0;
    const double g4 = 1.0 / ((10.0 - 1.0 / 1.1) * (x[3] + 0.1));
    const double want = 0.7 * g1 - 1.3 * g2 + 2.1 * g3 + 0.4 * g4 + 1.5 * g1 * g2 - 0.6 * g2 * g4 + 3.2 * g1 * g3 * g4;

    SampleMatrix m(1, 4, std::vector<double>(x, x + 4));
    EXPECT_NEAR(evaluate(spec, m)[0], want, 1e-12);
}

TEST(Evaluate, SwapsMatchDirectEvaluation) {
    const auto spec = generate_spec(12, 0.5, 0.3, 9);
    const auto A = random_points(16, 12, 1);
    const auto B = random_points(16, 12, 2);
    const MetafunctionEvaluator ev(spec);
    std::vector<double> base;
    const auto swaps = ev.evaluate_swaps(A, B, &base);
    EXPECT_EQ(base, evaluate(spec, A));
    ASSERT_EQ(swaps.size(), 12u);
    for (std::size_t i = 0; i < 12; ++i) {
        const auto direct = evaluate(spec, swap_column(A, B, i));
        for (std::size_t r = 0; r < 16; ++r) EXPECT_NEAR(swaps[i][r], direct[r], 1e-12 * (1 + std::abs(direct[r])));
    }
}

TEST(SpecText, RoundTrip) {
    const auto spec = generate_spec(7, 0.4, 0.2, 33);
    std::stringstream ss;
    write_spec(ss, spec);
    EXPECT_EQ(read_spec(ss), spec);
}
