#include <gtest/gtest.h>

#include <set>

#include "rydeit/random.hpp"
#include "rydeit/stats.hpp"

using namespace rydeit;

// Reference blocks from numpy.random.Philox (tools/oracles.py). numpy bumps
// the counter before its first block, so they belong to counter {1, 0, 0, 0}.
TEST(Philox, MatchesNumpyReferenceBlocks) {
    struct Case {
        Philox4x64::Key key;
        Philox4x64::Counter expected;
    };
    const Case cases[] = {
        {{0, 0}, {0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL}},
        {{42, 7}, {0xa64064f34e84b9a3ULL, 0xe287959a866a08fdULL, 0x8dc181f009b96c03ULL, 0xf3f6001d4fa83454ULL}},
        {{0xFFFFFFFFFFFFFFFFULL, 0x123456789ABCDEF0ULL},
         {0xfc5db4b9d07c20d8ULL, 0x45483ce23a7a9b2dULL, 0x5c898ebcc309892eULL, 0x8a41d246843f2f23ULL}},
    };
    for (const auto& c : cases) {
        EXPECT_EQ(Philox4x64::block({1, 0, 0, 0}, c.key), c.expected);
    }
}

TEST(TrialStream, SameKeySameSequence) {
    TrialStream a(99, 5), b(99, 5);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(TrialStream, DistinctTrialsDiffer) {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t t = 0; t < 1000; ++t) firsts.insert(TrialStream(1, t)());
    EXPECT_EQ(firsts.size(), 1000u);
    TrialStream a(1, 0), b(2, 0);
    EXPECT_NE(a(), b());
}

TEST(TrialStream, UniformMomentsAndRange) {
    TrialStream rng(1234, 0);
    RunningStats s;
    for (int i = 0; i < 200000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s.push(u);
    }
    // mean 1/2, variance 1/12; 5 sigma bands
    EXPECT_NEAR(s.mean(), 0.5, 5.0 * std::sqrt(1.0 / 12.0 / 200000));
    EXPECT_NEAR(s.variance(), 1.0 / 12.0, 0.002);
}

TEST(RunningStats, MatchesTwoPassAndMerges) {
    std::vector<double> xs;
    TrialStream rng(5, 5);
    for (int i = 0; i < 1001; ++i) xs.push_back(1e6 + rng.uniform());
    RunningStats all, left, right;
    double sum = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        all.push(xs[i]);
        (i < 400 ? left : right).push(xs[i]);
        sum += xs[i];
    }
    const double mean = sum / xs.size();
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    EXPECT_NEAR(all.mean(), mean, 1e-9);
    EXPECT_NEAR(all.variance(), ss / (xs.size() - 1), 1e-9);
    left.merge(right);
    EXPECT_NEAR(left.mean(), all.mean(), 1e-9);
    EXPECT_NEAR(left.variance(), all.variance(), 1e-9);
    EXPECT_EQ(left.count(), all.count());
}

TEST(RunningStats, ConstantInputHasZeroSem) {
    RunningStats s;
    for (int i = 0; i < 50; ++i) s.push(0.25);
    EXPECT_EQ(s.sem(), 0.0);
    EXPECT_EQ(s.mean(), 0.25);
}
