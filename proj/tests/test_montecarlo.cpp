#include <gtest/gtest.h>

#include "rydeit/montecarlo.hpp"

using namespace rydeit;

namespace {

SimConfig with_inputs(double z1_mhz, double z2_mhz, double g1 = 1.0, double g2 = 1.0) {
    SimConfig c = default_config();
    c.probe.zeta0 = {mhz(z1_mhz), mhz(z2_mhz)};
    c.probe.g0 = {g1, g2};
    return validate_config(c);
}

void expect_identical(const AggregateObservables& a, const AggregateObservables& b) {
    EXPECT_EQ(a.mean_T, b.mean_T);
    EXPECT_EQ(a.mean_G, b.mean_G);
    EXPECT_EQ(a.sem_T, b.sem_T);
    EXPECT_EQ(a.sem_G, b.sem_G);
    EXPECT_EQ(a.mean_T_diff, b.mean_T_diff);
    EXPECT_EQ(a.n_trials, b.n_trials);
}

}  // namespace

TEST(RunTrials, BitIdenticalAcrossThreadCounts) {
    const SimConfig c = with_inputs(0.8, 0.3, 2.0, 1.0);
    TrialPlan plan;
    plan.n_trials = 300;
    plan.master_seed = 77;
    plan.threads = 1;
    const auto serial = run_trials(c, plan);
    for (unsigned t : {2u, 3u, 8u}) {
        plan.threads = t;
        expect_identical(serial, run_trials(c, plan));
    }
}

TEST(RunTrials, SeedChangesResult) {
    const SimConfig c = with_inputs(1.0, 1.0);
    TrialPlan a, b;
    a.n_trials = b.n_trials = 200;
    b.master_seed = 2;
    EXPECT_NE(run_trials(c, a).mean_T[0], run_trials(c, b).mean_T[0]);
}

TEST(RunTrials, ZeroTrialsRejected) {
    TrialPlan plan;
    plan.n_trials = 0;
    try {
        run_trials(default_config(), plan);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoTrials);
    }
}

TEST(RunTrials, MeanFieldIsDeterministic) {
    TrialPlan plan;
    plan.n_trials = 50;
    plan.mode = CouplingMode::MeanField;
    const auto r = run_trials(with_inputs(0.6, 1.1), plan);
    EXPECT_EQ(r.sem_T[0], 0.0);
    EXPECT_EQ(r.sem_G[1], 0.0);
    TrialPlan single = plan;
    single.n_trials = 1;
    EXPECT_EQ(run_trials(with_inputs(0.6, 1.1), single).mean_T, r.mean_T);
}

TEST(RunTrials, SymmetricInputsGiveEqualTransmissions) {
    TrialPlan plan;
    plan.n_trials = 400;
    const auto r = run_trials(with_inputs(1.0, 1.0), plan);
    EXPECT_EQ(r.mean_T[0], r.mean_T[1]);
    EXPECT_EQ(r.mean_G[0], r.mean_G[1]);
    EXPECT_EQ(r.mean_T_diff, 0.0);
}

TEST(RunTrials, SwappingInputsSwapsOutputs) {
    TrialPlan plan;
    plan.n_trials = 300;
    const auto a = run_trials(with_inputs(0.2, 1.1, 3.0, 0.5), plan);
    const auto b = run_trials(with_inputs(1.1, 0.2, 0.5, 3.0), plan);
    EXPECT_EQ(a.mean_T[0], b.mean_T[1]);
    EXPECT_EQ(a.mean_T[1], b.mean_T[0]);
    EXPECT_EQ(a.mean_G[0], b.mean_G[1]);
}

TEST(RunTrials, WeakProbeIndependentMatchesLinearEit) {
    TrialPlan plan;
    plan.mode = CouplingMode::Independent;
    const auto r = run_trials(with_inputs(0.01, 0.01), plan);
    // exp(-43.5 * 0.00477707...)
    const double analytic = 0.8123674246359459;
    for (int a = 0; a < 2; ++a) {
        EXPECT_LE(std::abs(r.mean_T[a] - analytic), 3.0 * r.sem_T[a] + 1e-12);
        EXPECT_LE(std::abs(r.mean_T[a] - analytic), 1e-3);
    }
}

TEST(RunTrials, SemShrinksLikeInverseRootN) {
    const SimConfig c = with_inputs(1.0, 0.5);
    TrialPlan plan;
    plan.n_trials = 500;
    const auto small = run_trials(c, plan);
    plan.n_trials = 2000;
    const auto large = run_trials(c, plan);
    for (int a = 0; a < 2; ++a) {
        ASSERT_GT(small.sem_T[a], 0.0);
        const double ratio = large.sem_T[a] / small.sem_T[a];
        EXPECT_GT(ratio, 0.35);
        EXPECT_LT(ratio, 0.65);
    }
}

TEST(Aggregate, FoldsInIndexOrder) {
    std::vector<TrialObservables> trials{{{0.2, 0.4}, {1.0, 1.0}}, {{0.4, 0.8}, {0.5, 1.5}}};
    const auto r = aggregate(trials);
    EXPECT_DOUBLE_EQ(r.mean_T[0], 0.3);
    EXPECT_DOUBLE_EQ(r.mean_T[1], 0.6);
    EXPECT_DOUBLE_EQ(r.mean_T_diff, 0.3);
    EXPECT_DOUBLE_EQ(r.sem_T[0], 0.1);
    EXPECT_DOUBLE_EQ(r.mean_G[1], 1.25);
    EXPECT_EQ(r.n_trials, 2u);
}

TEST(Convergence, ConstantSourceRaisesNoFlag) {
    const auto report = convergence_report([](std::size_t) { return TrialObservables{{0.5, 0.5}, {1.0, 1.0}}; },
                                           100);
    ASSERT_EQ(report.checkpoints.size(), 3u);
    EXPECT_EQ(report.checkpoints[2].n_trials, 400u);
    EXPECT_FALSE(report.any_flag());
}

TEST(Convergence, FlagsNonShrinkingSem) {
    // First n trials tightly clustered, the rest spread widely.
    auto source = [](std::size_t i) {
        const double t = i < 100 ? (i % 2 ? 0.51 : 0.49) : (i % 2 ? 0.9 : 0.1);
        return TrialObservables{{t, 0.5}, {1.0, 1.0}};
    };
    const auto report = convergence_report(source, 100);
    EXPECT_TRUE(report.sem_not_shrinking[0]);
    EXPECT_FALSE(report.sem_not_shrinking[1]);
    EXPECT_TRUE(report.any_flag());
}

TEST(Convergence, RealRunShrinks) {
    TrialPlan plan;
    plan.n_trials = 200;
    const auto report = convergence_report(with_inputs(1.0, 0.7), plan);
    EXPECT_FALSE(report.any_flag());
    EXPECT_LT(report.checkpoints[2].result.sem_T[0], report.checkpoints[0].result.sem_T[0]);
}

TEST(Convergence, RejectsSmallN) {
    TrialPlan plan;
    plan.n_trials = 50;
    EXPECT_THROW(convergence_report(default_config(), plan), Error);
}

TEST(ParallelFor, PropagatesWorkerException) {
    EXPECT_THROW(detail::parallel_for(100, 4,
                                      [](std::size_t i) {
                                          if (i == 77) throw Error(ErrorCode::BadConfig, "boom");
                                      }),
                 Error);
}
