#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "srm/spectrum.hpp"

using namespace srm;

TEST(Spectrum, ExpectationSpectrum) {
    const auto s = StepSpectrum::make({0, 1}, {1});
    EXPECT_EQ(s, expectation_spectrum());
    EXPECT_EQ(s(0.3), 1.0);
    EXPECT_EQ(s.integral(), 1.0);
}

TEST(Spectrum, AvarSpectrumFromSteps) {
    const auto s = StepSpectrum::make({0, 0.5, 1}, {0, 2});
    EXPECT_EQ(s, avar_spectrum(0.5));
    EXPECT_EQ(s(0.25), 0.0);
    EXPECT_EQ(s(0.5), 2.0);
    EXPECT_EQ(s(1.0), 2.0);
}

TEST(Spectrum, RejectsInvalid) {
    EXPECT_THROW(StepSpectrum::make({0, 0.5, 1}, {2, 0}), std::invalid_argument);
    EXPECT_THROW(StepSpectrum::make({0, 0.5, 1}, {-1, 3}), std::invalid_argument);
    EXPECT_THROW(StepSpectrum::make({0, 0.5, 1}, {1, 2}), std::invalid_argument);
    EXPECT_THROW(StepSpectrum::make({0.1, 1}, {1}), std::invalid_argument);
    EXPECT_THROW(StepSpectrum::make({0, 0.6, 0.5, 1}, {1, 1, 1}), std::invalid_argument);
    EXPECT_THROW(StepSpectrum::make({0, 1}, {1, 2}), std::invalid_argument);
    EXPECT_THROW(StepSpectrum::majorant({0, 0.5, 1}, {0.5, 0.5}), std::invalid_argument);
}

TEST(Spectrum, NormalizeRescales) {
    const auto s = StepSpectrum::make({0, 0.5, 1}, {1, 3}, true);
    EXPECT_NEAR(s.levels()[0], 0.5, 1e-15);
    EXPECT_NEAR(s.levels()[1], 1.5, 1e-15);
    EXPECT_FALSE(s.is_majorant());
}

TEST(Spectrum, CanonicalForm) {
    const auto s = StepSpectrum::make({0, 0.25, 0.25, 0.5, 1}, {1, 1, 1, 1});
    EXPECT_EQ(s.cells(), 1u);
    EXPECT_EQ(s, expectation_spectrum());
}

TEST(Spectrum, AvarSpectrumExamples) {
    EXPECT_EQ(avar_spectrum(0.0), expectation_spectrum());
    EXPECT_EQ(avar_spectrum(0.5).levels(), (std::vector<double>{0, 2}));
    EXPECT_EQ(avar_spectrum(0.75).levels(), (std::vector<double>{0, 4}));
    EXPECT_THROW(avar_spectrum(1.0), std::invalid_argument);
    EXPECT_THROW(avar_spectrum(-0.1), std::invalid_argument);
}

TEST(Spectrum, TauExamples) {
    const auto s = avar_spectrum(0.5);
    EXPECT_DOUBLE_EQ(tau(s, 0.25), 1.0);
    EXPECT_DOUBLE_EQ(tau(s, 0.75), 0.5);
    EXPECT_DOUBLE_EQ(tau(s, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(tau(s, 1.0), 0.0);
}

TEST(Spectrum, TauMatchesOverlapSum) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int rep = 0; rep < 100; ++rep) {
        const auto r = oracle::random_step(rng, 1 + rng() % 10);
        const auto s = StepSpectrum::make(r.breaks, r.levels, true);
        double prev = tau(s, 0.0);
        EXPECT_NEAR(prev, 1.0, 1e-12);
        for (int k = 0; k < 50; ++k) {
            const double a = unit(rng);
            double expect = 0.0;
            for (std::size_t i = 0; i < s.cells(); ++i)
                expect += s.levels()[i] * oracle::overlap(a, 1.0, s.breaks()[i], s.breaks()[i + 1]);
            EXPECT_NEAR(tau(s, a), expect, 1e-12);
        }
        // nonincreasing and concave on a uniform grid
        const int N = 200;
        std::vector<double> t(N + 1);
        for (int k = 0; k <= N; ++k) t[k] = tau(s, static_cast<double>(k) / N);
        for (int k = 1; k <= N; ++k) EXPECT_LE(t[k], t[k - 1] + 1e-15);
        for (int k = 1; k < N; ++k) EXPECT_GE(t[k], 0.5 * (t[k - 1] + t[k + 1]) - 1e-12);
    }
}

TEST(Spectrum, ToKusuokaExamples) {
    auto m = to_kusuoka(avar_spectrum(0.5));
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m.atoms()[0].location, 0.5);
    EXPECT_EQ(m.atoms()[0].mass, 1.0);

    m = to_kusuoka(expectation_spectrum());
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m.atoms()[0].location, 0.0);
    EXPECT_EQ(m.atoms()[0].mass, 1.0);

    m = to_kusuoka(StepSpectrum::make({0, 0.5, 1}, {0.5, 1.5}));
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m.atoms()[0].location, 0.0);
    EXPECT_DOUBLE_EQ(m.atoms()[0].mass, 0.5);
    EXPECT_EQ(m.atoms()[1].location, 0.5);
    EXPECT_DOUBLE_EQ(m.atoms()[1].mass, 0.5);
}

TEST(Spectrum, FromKusuokaExamples) {
    EXPECT_EQ(from_kusuoka(KusuokaMeasure::make({{0.5, 1.0}})), avar_spectrum(0.5));
    EXPECT_EQ(from_kusuoka(KusuokaMeasure::make({{0.0, 1.0}})), expectation_spectrum());
    const auto s = from_kusuoka(KusuokaMeasure::make({{0.0, 0.5}, {0.5, 0.5}}));
    EXPECT_EQ(s.breaks(), (std::vector<double>{0, 0.5, 1}));
    EXPECT_DOUBLE_EQ(s.levels()[0], 0.5);
    EXPECT_DOUBLE_EQ(s.levels()[1], 1.5);
}

TEST(Spectrum, KusuokaRejectsInvalid) {
    EXPECT_THROW(KusuokaMeasure::make({{1.0, 1.0}}), std::invalid_argument);
    EXPECT_THROW(KusuokaMeasure::make({{0.5, 0.6}}), std::invalid_argument);
    EXPECT_THROW(KusuokaMeasure::make({{-0.1, 1.0}}), std::invalid_argument);
    EXPECT_THROW(KusuokaMeasure::make({{0.2, 1.5}, {0.3, -0.5}}), std::invalid_argument);
    const auto merged = KusuokaMeasure::make({{0.3, 0.25}, {0.1, 0.5}, {0.3, 0.25}});
    ASSERT_EQ(merged.size(), 2u);
    EXPECT_EQ(merged.atoms()[0].location, 0.1);
    EXPECT_EQ(merged.atoms()[1].mass, 0.5);
}

TEST(Spectrum, KusuokaIsProbabilityAndRoundTrips) {
    std::mt19937_64 rng(22);
    for (int rep = 0; rep < 300; ++rep) {
        const auto r = oracle::random_step(rng, 1 + rng() % 20);
        const auto s = StepSpectrum::make(r.breaks, r.levels, true);
        const auto m = to_kusuoka(s);
        EXPECT_NEAR(m.total_mass(), 1.0, 1e-12);
        for (const auto& a : m.atoms()) {
            EXPECT_GT(a.mass, 0.0);
            EXPECT_LT(a.location, 1.0);
        }
        const auto back = from_kusuoka(m);
        ASSERT_EQ(back.breaks(), s.breaks());
        for (std::size_t i = 0; i < s.cells(); ++i) EXPECT_NEAR(back.levels()[i], s.levels()[i], 1e-12);
        const auto again = to_kusuoka(back);
        ASSERT_EQ(again.size(), m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            EXPECT_EQ(again.atoms()[i].location, m.atoms()[i].location);
            EXPECT_NEAR(again.atoms()[i].mass, m.atoms()[i].mass, 1e-12);
        }
    }
}

TEST(Spectrum, DiscretizeLinearDensity) {
    auto lin = [](double u) { return 2.0 * u; };
    auto d2 = discretize_upper(lin, 2);
    EXPECT_EQ(d2.spectrum.breaks(), (std::vector<double>{0, 0.5, 1}));
    EXPECT_NEAR(d2.spectrum.levels()[0], 1.0, 1e-15);
    EXPECT_NEAR(d2.spectrum.levels()[1], 2.0, 1e-15);
    EXPECT_NEAR(d2.spectrum.integral(), 1.5, 1e-15);
    EXPECT_NEAR(d2.excess, 0.5, 1e-15);
    EXPECT_TRUE(d2.spectrum.is_majorant());

    auto d4 = discretize_upper(lin, 4);
    const std::vector<double> expect{0.5, 1.0, 1.5, 2.0};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(d4.spectrum.levels()[i], expect[i], 1e-15);
    EXPECT_NEAR(d4.excess, 0.25, 1e-15);
}

TEST(Spectrum, DiscretizeStepIsFixedPoint) {
    const auto s = avar_spectrum(0.5);
    auto d = discretize_upper([&](double u) { return s(u); }, 2);
    EXPECT_EQ(d.spectrum, s);
    EXPECT_EQ(d.excess, 0.0);
    EXPECT_FALSE(d.spectrum.is_majorant());
}

TEST(Spectrum, DiscretizeDominatesAndExcessShrinks) {
    const std::vector<std::function<double(double)>> fns{
        [](double u) { return 2.0 * u; },
        [](double u) { return 3.0 * u * u; },
        [](double u) { return 2.0 * std::exp(2.0 * u) / std::expm1(2.0); },
    };
    for (const auto& fn : fns) {
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t n : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
            const auto d = discretize_upper(fn, n);
            for (int k = 0; k < 1000; ++k) {
                const double u = (k + 0.5) / 1000.0;
                EXPECT_GE(d.spectrum(u), fn(u) - 1e-12);
            }
            EXPECT_GE(d.excess, -1e-12);
            EXPECT_LE(d.excess, prev + 1e-15);
            prev = d.excess;
        }
    }
}

TEST(Spectrum, DiscretizeRejects) {
    EXPECT_THROW(discretize_upper([](double u) { return 1.0 - u; }, 4), std::invalid_argument);
    EXPECT_THROW(discretize_upper([](double u) { return u < 1.0 ? 1.0 : INFINITY; }, 4), std::invalid_argument);
    EXPECT_THROW(discretize_upper([](double) { return 2.0; }, 4), std::invalid_argument);
    EXPECT_THROW(discretize_upper([](double u) { return 2.0 * u; }, 0), std::invalid_argument);
}
