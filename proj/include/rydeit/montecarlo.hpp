// montecarlo.hpp - Trial orchestration, deterministic seeding and aggregation.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "core.hpp"
#include "propagation.hpp"
#include "random.hpp"
#include "stats.hpp"

namespace rydeit {

struct TrialPlan {
    std::size_t n_trials = 2000;
    std::uint64_t master_seed = 1;
    CouplingMode mode = CouplingMode::SharedBlockade;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Observables of one trial.
struct TrialObservables {
    PerEnsemble T{1.0, 1.0};
    PerEnsemble G{1.0, 1.0};
};

/// One trial = the forward and the mirrored realization on the trial's own
/// stream, averaged. The mirrored pass reuses the same draws with the two
/// ensembles' uniforms exchanged, so exchanging the ensembles' inputs exchanges
/// the trial's outputs bit for bit.
inline TrialObservables run_trial(const SimConfig& config, CouplingMode mode,
                                  std::uint64_t master_seed, std::uint64_t trial_index) {
    TrialStream forward_rng(master_seed, trial_index);
    TrialStream mirrored_rng(master_seed, trial_index);
    const Observables f = run_realization(config, mode, forward_rng, DrawOrder::Forward);
    const Observables m = run_realization(config, mode, mirrored_rng, DrawOrder::Mirrored);
    TrialObservables out;
    for (int a = 0; a < 2; ++a) {
        out.T[a] = 0.5 * (f.T[a] + m.T[a]);
        out.G[a] = 0.5 * (f.G[a] + m.G[a]);
    }
    return out;
}

struct AggregateObservables {
    PerEnsemble mean_T{}, mean_G{};
    PerEnsemble sem_T{}, sem_G{};
    double mean_T_diff = 0.0;  // mean of T2 - T1
    double sem_T_diff = 0.0;
    std::size_t n_trials = 0;
};

/// Folds trial results in index order.
inline AggregateObservables aggregate(std::span<const TrialObservables> trials) {
    std::array<RunningStats, 2> t, g;
    RunningStats diff;
    for (const auto& trial : trials) {
        for (int a = 0; a < 2; ++a) {
            t[a].push(trial.T[a]);
            g[a].push(trial.G[a]);
        }
        diff.push(trial.T[1] - trial.T[0]);
    }
    AggregateObservables out;
    for (int a = 0; a < 2; ++a) {
        out.mean_T[a] = t[a].mean();
        out.sem_T[a] = t[a].sem();
        out.mean_G[a] = g[a].mean();
        out.sem_G[a] = g[a].sem();
    }
    out.mean_T_diff = diff.mean();
    out.sem_T_diff = diff.sem();
    out.n_trials = trials.size();
    return out;
}

namespace detail {

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Calls fn(i) for every i in [0, count) on `threads` workers, in contiguous
/// blocks. The first exception thrown by any worker is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    const unsigned workers = worker_count(threads, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Per-trial observables for trial indices [first, first + count).
inline std::vector<TrialObservables> run_trial_batch(const SimConfig& config, const TrialPlan& plan,
                                                     std::size_t first, std::size_t count) {
    std::vector<TrialObservables> out(count);
    detail::parallel_for(count, plan.threads, [&](std::size_t i) {
        out[i] = run_trial(config, plan.mode, plan.master_seed, first + i);
    });
    return out;
}

inline AggregateObservables run_trials(const SimConfig& config, const TrialPlan& plan) {
    if (plan.n_trials == 0) throw Error(ErrorCode::NoTrials, "n_trials must be at least 1");
    const auto trials = run_trial_batch(config, plan, 0, plan.n_trials);
    return aggregate(trials);
}

struct ConvergenceCheckpoint {
    std::size_t n_trials = 0;
    AggregateObservables result;
};

struct ConvergenceReport {
    std::vector<ConvergenceCheckpoint> checkpoints;  // n, 2n, 4n
    /// Per observable (T1, T2, G1, G2): SEM failed to shrink from n to 4n.
    std::array<bool, 4> sem_not_shrinking{};

    bool any_flag() const {
        return std::any_of(sem_not_shrinking.begin(), sem_not_shrinking.end(),
                           [](bool b) { return b; });
    }
};

/// Aggregates the first n, 2n and 4n trials produced by `trial_source(index)`.
template <class TrialSource>
ConvergenceReport convergence_report(TrialSource&& trial_source, std::size_t n) {
    if (n < 100) throw Error(ErrorCode::NoTrials, "convergence report needs n >= 100");
    std::vector<TrialObservables> trials(4 * n);
    for (std::size_t i = 0; i < trials.size(); ++i) trials[i] = trial_source(i);

    ConvergenceReport report;
    for (std::size_t k : {n, 2 * n, 4 * n}) {
        report.checkpoints.push_back({k, aggregate(std::span(trials).first(k))});
    }
    const auto& first = report.checkpoints.front().result;
    const auto& last = report.checkpoints.back().result;
    const std::array<double, 4> sem0{first.sem_T[0], first.sem_T[1], first.sem_G[0], first.sem_G[1]};
    const std::array<double, 4> sem2{last.sem_T[0], last.sem_T[1], last.sem_G[0], last.sem_G[1]};
    for (int k = 0; k < 4; ++k) report.sem_not_shrinking[k] = sem0[k] > 0.0 && sem2[k] >= sem0[k];
    return report;
}

/// Convergence of run_trials for `plan`, with plan.n_trials as the first checkpoint.
inline ConvergenceReport convergence_report(const SimConfig& config, const TrialPlan& plan) {
    if (plan.n_trials < 100) throw Error(ErrorCode::NoTrials, "convergence report needs n >= 100");
    const auto trials = run_trial_batch(config, plan, 0, 4 * plan.n_trials);
    return convergence_report([&](std::size_t i) { return trials[i]; }, plan.n_trials);
}

}  // namespace rydeit
