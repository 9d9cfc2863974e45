#include <gtest/gtest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "srm/distribution.hpp"

using srm::EmpiricalDistribution;

namespace {

EmpiricalDistribution uniform4() {
    const std::vector<double> v{1, 2, 3, 4};
    return EmpiricalDistribution::from_samples(v);
}

}  // namespace

TEST(Distribution, MergesDuplicatesWithEqualWeights) {
    const std::vector<double> v{3, 1, 1};
    const auto d = EmpiricalDistribution::from_samples(v);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d.values(), (std::vector<double>{1, 3}));
    EXPECT_NEAR(d.probs()[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(d.probs()[1], 1.0 / 3.0, 1e-15);
}

TEST(Distribution, SingleSampleIsPointMass) {
    const std::vector<double> v{5};
    const auto d = EmpiricalDistribution::from_samples(v);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.values()[0], 5.0);
    EXPECT_EQ(d.probs()[0], 1.0);
    EXPECT_EQ(d.cumulative().back(), 1.0);
}

TEST(Distribution, RenormalizesWeights) {
    const std::vector<double> v{1, 2};
    const std::vector<double> p{0.2, 0.6};
    const auto d = EmpiricalDistribution::from_samples(v, p);
    EXPECT_NEAR(d.probs()[0], 0.25, 1e-15);
    EXPECT_NEAR(d.probs()[1], 0.75, 1e-15);
}

TEST(Distribution, DropsZeroWeights) {
    const std::vector<double> v{1, 2, 3};
    const std::vector<double> p{0.5, 0.0, 0.5};
    const auto d = EmpiricalDistribution::from_samples(v, p);
    EXPECT_EQ(d.values(), (std::vector<double>{1, 3}));
}

TEST(Distribution, RejectsBadInput) {
    const std::vector<double> empty;
    EXPECT_THROW(EmpiricalDistribution::from_samples(empty), std::invalid_argument);
    const std::vector<double> v{1, 2};
    const std::vector<double> neg{0.5, -0.1};
    EXPECT_THROW(EmpiricalDistribution::from_samples(v, neg), std::invalid_argument);
    const std::vector<double> zero{0.0, 0.0};
    EXPECT_THROW(EmpiricalDistribution::from_samples(v, zero), std::invalid_argument);
    const std::vector<double> short_p{1.0};
    EXPECT_THROW(EmpiricalDistribution::from_samples(v, short_p), std::invalid_argument);
}

TEST(Distribution, QuantileExamples) {
    const auto d = uniform4();
    EXPECT_EQ(d.quantile(0.5), 2.0);
    EXPECT_EQ(d.quantile(0.6), 3.0);
    EXPECT_EQ(d.quantile(0.0), 1.0);
    EXPECT_EQ(d.quantile(1.0), 4.0);
    EXPECT_EQ(d.quantile(0.25), 1.0);
    EXPECT_EQ(d.quantile(0.2500001), 2.0);
    const auto pm = EmpiricalDistribution::point_mass(7.0);
    for (double a : {0.0, 0.3, 1.0}) EXPECT_EQ(pm.quantile(a), 7.0);
    EXPECT_THROW(d.quantile(-0.1), std::invalid_argument);
    EXPECT_THROW(d.quantile(1.1), std::invalid_argument);
}

TEST(Distribution, CdfExamples) {
    const auto d = uniform4();
    EXPECT_EQ(d.cdf(2.0), 0.5);
    EXPECT_EQ(d.cdf(1.5), 0.25);
    EXPECT_EQ(d.cdf(4.0), 1.0);
    EXPECT_EQ(d.cdf(0.5), 0.0);
    EXPECT_EQ(d.cdf(100.0), 1.0);
}

TEST(Distribution, QuantileMatchesCountingOracle) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-10, 10), unit(0, 1);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng() % 20;
        std::vector<double> v(n);
        for (auto& x : v) x = std::round(val(rng));  // ties happen
        const auto p = oracle::random_probs(rng, n);
        const auto d = EmpiricalDistribution::from_samples(v, p);
        const auto law = oracle::make_law(v, p);
        ASSERT_EQ(d.values(), law.values);
        for (int k = 0; k < 50; ++k) {
            const double a = unit(rng);
            EXPECT_EQ(d.quantile(a), oracle::quantile(law, a));
        }
    }
}

TEST(Distribution, GaloisRelation) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> val(-10, 10), unit(0, 1);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + rng() % 15;
        std::vector<double> v(n);
        for (auto& x : v) x = val(rng);
        const auto d = EmpiricalDistribution::from_samples(v, oracle::random_probs(rng, n));
        for (int k = 0; k < 50; ++k) {
            const double a = unit(rng);
            if (a > 0.0) {
                EXPECT_GE(d.cdf(d.quantile(a)), a - 1e-15);
            }
            const double y = d.min() + unit(rng) * (d.max() - d.min() + 1.0);
            EXPECT_LE(d.quantile(d.cdf(y)), y);
        }
    }
}

TEST(Distribution, QuantileNondecreasingAndLeftContinuous) {
    const std::vector<double> v{1, 2, 3};
    const std::vector<double> p{0.25, 0.25, 0.5};
    const auto d = EmpiricalDistribution::from_samples(v, p);
    double prev = d.quantile(0.0);
    for (int k = 1; k <= 1000; ++k) {
        const double q = d.quantile(k / 1000.0);
        EXPECT_GE(q, prev);
        prev = q;
    }
    // flat cdf segment (0.5, 1]: every level returns the value just after 0.5
    EXPECT_EQ(d.quantile(0.5), 2.0);
    EXPECT_EQ(d.quantile(0.5 + 1e-12), 3.0);
    EXPECT_EQ(d.quantile(0.75), d.quantile(0.5 + 1e-12));
}

TEST(Distribution, MeanEqualsQuantileIntegral) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> val(-100, 100);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + rng() % 30;
        std::vector<double> v(n);
        for (auto& x : v) x = val(rng);
        const auto d = EmpiricalDistribution::from_samples(v, oracle::random_probs(rng, n));
        double integral = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) integral += d.values()[i] * (d.cumulative()[i] - d.cell_begin(i));
        EXPECT_NEAR(d.mean(), integral, 1e-10);  // values up to 100
    }
}
