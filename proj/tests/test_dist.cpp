#include "guessrisk/dist.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace guessrisk;

namespace {

std::vector<double> probs(const Pmf& p) { return {p.probs().begin(), p.probs().end()}; }

} // namespace

TEST(MakePmf, SortsNonincreasing) {
    const Pmf p = make_pmf({0.25, 0.5, 0.25});
    EXPECT_EQ(probs(p), (std::vector<double>{0.5, 0.25, 0.25}));
    // Stable ties: the two 0.25 entries keep their raw order.
    EXPECT_EQ(p.labels()[0], 1u);
    EXPECT_EQ(p.labels()[1], 0u);
    EXPECT_EQ(p.labels()[2], 2u);
}

TEST(MakePmf, Normalizes) {
    EXPECT_EQ(probs(make_pmf({2, 1, 1})), (std::vector<double>{0.5, 0.25, 0.25}));
}

TEST(MakePmf, StripsZeros) {
    const Pmf p = make_pmf({0.3, 0.0, 0.7});
    EXPECT_EQ(p.size(), 2u);
    EXPECT_EQ(p.alphabet_size(), 3u);
    EXPECT_DOUBLE_EQ(p[0], 0.7);
    EXPECT_DOUBLE_EQ(p[1], 0.3);
    EXPECT_EQ(p.labels()[0], 2u);
    EXPECT_EQ(p.labels()[1], 0u);
}

TEST(MakePmf, RejectsBadInput) {
    EXPECT_THROW(make_pmf(std::vector<double>{}), ValidationError);
    EXPECT_THROW(make_pmf({0.0, 0.0}), ValidationError);
    EXPECT_THROW(make_pmf({0.5, -0.1}), ValidationError);
    EXPECT_THROW(make_pmf({0.5, std::nan("")}), ValidationError);
}

TEST(MakePmf, IdempotentOnRandomInputs) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        auto w = testkit::random_weights(rng, testkit::pick(rng, 1, 12));
        if (k % 3 == 0) w.push_back(0.0);
        const Pmf once = make_pmf(w);
        const Pmf twice = make_pmf(probs(once));
        ASSERT_EQ(once.size(), twice.size());
        for (std::size_t i = 0; i < once.size(); ++i) ASSERT_NEAR(once[i], twice[i], 4e-16);
        double total = 0.0;
        for (double v : once.probs()) total += v;
        ASSERT_NEAR(total, 1.0, kMassTolerance);
    }
}

// ---------------------------------------------------------------------------

TEST(ProductPower, IdentityAtN1) {
    const auto a = product_power(make_pmf({0.75, 0.25}), 1);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a.atoms()[0], (Atom{0.75, 1}));
    EXPECT_EQ(a.atoms()[1], (Atom{0.25, 1}));
}

TEST(ProductPower, BinarySquare) {
    // Sequences 00, 01, 10, 11 grouped by probability.
    const auto a = product_power(make_pmf({0.75, 0.25}), 2);
    ASSERT_EQ(a.size(), 3u);
    EXPECT_DOUBLE_EQ(a.atoms()[0].value, 0.5625);
    EXPECT_EQ(a.atoms()[0].multiplicity, 1.0);
    EXPECT_DOUBLE_EQ(a.atoms()[1].value, 0.1875);
    EXPECT_EQ(a.atoms()[1].multiplicity, 2.0);
    EXPECT_DOUBLE_EQ(a.atoms()[2].value, 0.0625);
    EXPECT_EQ(a.atoms()[2].multiplicity, 1.0);
}

TEST(ProductPower, MatchesFullEnumerationForTernaryCube) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        const Pmf p = make_pmf(testkit::random_weights(rng, 3));
        const auto flat = testkit::enumerate_product(p, 3);
        ASSERT_EQ(flat.size(), 27u);
        const Pmf expanded = expand(product_power(p, 3));
        ASSERT_EQ(expanded.size(), flat.size());
        for (std::size_t i = 0; i < flat.size(); ++i) ASSERT_NEAR(expanded[i], flat[i], 1e-15);
    }
}

TEST(ProductPower, BinaryHasBinomialTypeClasses) {
    const auto a = product_power(make_pmf({0.7, 0.3}), 20);
    ASSERT_EQ(a.size(), 21u);
    double binom = 1.0;
    for (std::size_t k = 0; k <= 20; ++k) {
        EXPECT_DOUBLE_EQ(a.atoms()[k].multiplicity, binom);
        binom = binom * static_cast<double>(20 - k) / static_cast<double>(k + 1);
    }
}

TEST(ProductPower, TotalMassIsOne) {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 30; ++k) {
        const Pmf p = testkit::random_pmf(rng, 2, 4);
        const std::size_t n = testkit::pick(rng, 1, 12);
        ASSERT_NEAR(product_power(p, n).total_mass(), 1.0, kMassTolerance);
    }
    EXPECT_NEAR(product_power(make_pmf({0.25, 0.75}), 512).total_mass(), 1.0, kMassTolerance);
}

TEST(ProductPower, SplitsAdditively) {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 20; ++k) {
        const Pmf p = testkit::random_pmf(rng, 2, 3);
        const std::size_t a = testkit::pick(rng, 1, 4), b = testkit::pick(rng, 1, 4);
        const auto whole = product_power(p, a + b);
        const auto split = product(product_power(p, a), product_power(p, b));
        ASSERT_EQ(whole.size(), split.size());
        for (std::size_t i = 0; i < whole.size(); ++i) {
            ASSERT_NEAR(whole.atoms()[i].value, split.atoms()[i].value, 1e-12 * whole.atoms()[i].value);
            ASSERT_EQ(whole.atoms()[i].multiplicity, split.atoms()[i].multiplicity);
        }
    }
}

TEST(ProductPower, EnforcesAtomCap) {
    const Pmf p = make_pmf({0.4, 0.3, 0.2, 0.1});
    EXPECT_THROW(product_power(p, 6, 10), ResourceError);
    EXPECT_NO_THROW(product_power(p, 2, 10));
    EXPECT_THROW(product_power(p, 0), DomainError);
}

// ---------------------------------------------------------------------------

TEST(Joint, UniformMarginal) {
    const auto j = JointPmf::from_rows({{0.25, 0.25}, {0.25, 0.25}});
    EXPECT_EQ(marginal_y(j), (std::vector<double>{0.5, 0.5}));
}

TEST(Joint, ConditionalNormalizesColumn) {
    const auto j = JointPmf::from_rows({{0.4, 0.1}, {0.2, 0.3}});
    const Pmf c = conditional_x_given_y(j, 0);
    EXPECT_NEAR(c[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(c[1], 1.0 / 3.0, 1e-15);
}

TEST(Joint, DiagonalGivesPointMass) {
    const auto j = JointPmf::from_rows({{0.3, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.0, 0.0, 0.2}});
    for (std::size_t y = 0; y < 3; ++y) {
        const Pmf c = conditional_x_given_y(j, y);
        ASSERT_EQ(c.size(), 1u);
        EXPECT_EQ(c.labels()[0], y);
    }
}

TEST(Joint, ZeroColumnIsRejected) {
    const auto j = JointPmf::from_rows({{0.5, 0.0}, {0.5, 0.0}});
    EXPECT_THROW(conditional_x_given_y(j, 1), ValidationError);
    EXPECT_THROW(JointPmf::from_rows({{0.5, 0.1}, {0.4}}), ValidationError);
}
