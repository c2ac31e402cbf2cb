// experiments.hpp - Detuning spectra, cross-talk scans and two-parameter maps.
//
// Every grid point reuses the plan's master seed, so trial t sees the same
// random stream at every point (common random numbers). Differences and
// ratios between points are therefore much less noisy than the points.
// Frequency-valued grids are angular frequencies (rad/us), like SimConfig.

#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "montecarlo.hpp"

namespace rydeit {

/// Inclusive, evenly spaced grid of `count` points.
inline std::vector<double> linspace(double first, double last, std::size_t count) {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = first;
        return out;
    }
    const double step = (last - first) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = first + step * static_cast<double>(i);
    out.back() = last;
    return out;
}

inline std::vector<double> default_detuning_grid() { return linspace(mhz(-8.0), mhz(8.0), 161); }
inline std::vector<double> default_zeta_grid() { return linspace(mhz(0.01), mhz(1.2), 21); }
inline std::vector<double> default_g_grid() { return linspace(0.1, 5.0, 21); }

inline void require_increasing(std::span<const double> grid, const char* what) {
    if (grid.empty()) throw Error(ErrorCode::BadConfig, std::string(what) + " grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1]))
            throw Error(ErrorCode::BadConfig, std::string(what) + " grid must be strictly increasing");
    }
}

/// Locked: delta1 = delta2 = delta. Respective: ensemble a's curve scans
/// delta_a while the other ensemble keeps its configured detuning.
enum class DetuningLock { Locked, Respective };

struct SpectrumResult {
    std::vector<double> detunings;
    std::vector<AggregateObservables> points;
    DetuningLock lock = DetuningLock::Locked;
};

inline SpectrumResult spectrum_scan(const SimConfig& config, const TrialPlan& plan,
                                    std::span<const double> grid,
                                    DetuningLock lock = DetuningLock::Locked) {
    require_increasing(grid, "detuning");
    SpectrumResult out;
    out.detunings.assign(grid.begin(), grid.end());
    out.lock = lock;
    out.points.reserve(grid.size());
    for (double delta : grid) {
        if (lock == DetuningLock::Locked) {
            SimConfig c = config;
            c.params.delta = {delta, delta};
            out.points.push_back(run_trials(c, plan));
            continue;
        }
        SimConfig first = config;
        first.params.delta[0] = delta;
        SimConfig second = config;
        second.params.delta[1] = delta;
        const AggregateObservables a = run_trials(first, plan);
        const AggregateObservables b = run_trials(second, plan);
        AggregateObservables merged = a;
        merged.mean_T[1] = b.mean_T[1];
        merged.sem_T[1] = b.sem_T[1];
        merged.mean_G[1] = b.mean_G[1];
        merged.sem_G[1] = b.sem_G[1];
        merged.mean_T_diff = merged.mean_T[1] - merged.mean_T[0];
        merged.sem_T_diff = std::hypot(merged.sem_T[0], merged.sem_T[1]);
        out.points.push_back(merged);
    }
    return out;
}

/// Which input of ensemble 1 a cross-talk scan varies.
enum class InputKind { Intensity, Correlation };

/// One spectrum per value of ensemble 1's input (zeta1 or g1); ensemble 2
/// keeps its configured input throughout.
inline std::vector<SpectrumResult> cross_talk_scan(const SimConfig& config, const TrialPlan& plan,
                                                   std::span<const double> first_inputs,
                                                   InputKind kind, std::span<const double> grid,
                                                   DetuningLock lock = DetuningLock::Respective) {
    std::vector<SpectrumResult> out;
    out.reserve(first_inputs.size());
    for (double value : first_inputs) {
        SimConfig c = config;
        if (kind == InputKind::Intensity) {
            c.probe.zeta0[0] = value;
        } else {
            c.probe.g0[0] = value;
        }
        out.push_back(spectrum_scan(validate_config(c), plan, grid, lock));
    }
    return out;
}

enum class SweepKind { TransmissivityDiff, GrowthIntensity, GrowthCorrelation };

inline std::string_view to_string(SweepKind kind) {
    switch (kind) {
        case SweepKind::TransmissivityDiff: return "transmissivity_diff";
        case SweepKind::GrowthIntensity: return "growth_intensity";
        case SweepKind::GrowthCorrelation: return "growth_correlation";
    }
    return "";
}

struct SweepAxis {
    std::string name;
    std::vector<double> values;
    bool frequency = false;  // written in MHz when true
};

/// Row-major scalar map: value(iy, ix) = values[iy * x.size() + ix].
struct SweepMap {
    SweepKind kind = SweepKind::TransmissivityDiff;
    SweepAxis x, y;
    std::vector<double> values;
    std::vector<double> sem;

    double at(std::size_t iy, std::size_t ix) const { return values[iy * x.values.size() + ix]; }
    double sem_at(std::size_t iy, std::size_t ix) const { return sem[iy * x.values.size() + ix]; }
};

/// |mean T2 - mean T1| on resonance over (zeta1 = x, zeta2 = y).
inline SweepMap transmissivity_diff_map(const SimConfig& config, const TrialPlan& plan,
                                        std::span<const double> zeta1_grid,
                                        std::span<const double> zeta2_grid, PerEnsemble g0) {
    require_increasing(zeta1_grid, "zeta1");
    require_increasing(zeta2_grid, "zeta2");
    SweepMap map;
    map.kind = SweepKind::TransmissivityDiff;
    map.x = {"zeta1_mhz", {zeta1_grid.begin(), zeta1_grid.end()}, true};
    map.y = {"zeta2_mhz", {zeta2_grid.begin(), zeta2_grid.end()}, true};
    for (double z2 : zeta2_grid) {
        for (double z1 : zeta1_grid) {
            SimConfig c = config;
            c.params.delta = {0.0, 0.0};
            c.probe.zeta0 = {z1, z2};
            c.probe.g0 = g0;
            const AggregateObservables r = run_trials(validate_config(c), plan);
            map.values.push_back(std::abs(r.mean_T_diff));
            map.sem.push_back(r.sem_T_diff);
        }
    }
    return map;
}

/// Which ensemble's input is pinned to the baseline value in the growth-rate
/// denominator. SecondEnsemble: eta = T2(in1, in2) / T2(in1, in2_0) - 1.
/// FirstEnsemble: eta = T2(in1, in2) / T2(in1_0, in2) - 1.
enum class GrowthBaseline { SecondEnsemble, FirstEnsemble };

struct GrowthOptions {
    InputKind kind = InputKind::Intensity;
    GrowthBaseline baseline = GrowthBaseline::SecondEnsemble;
    std::optional<double> baseline_value;  // default: 0.01 MHz or g = 1.0
};

inline double default_growth_baseline(InputKind kind) {
    return kind == InputKind::Intensity ? mhz(0.01) : 1.0;
}

/// Growth rate of ensemble 2's resonant transmissivity over the grid
/// (ensemble-2 input = x, ensemble-1 input = y). The error estimate is the
/// delta-method SEM of the ratio using paired per-trial values.
inline SweepMap growth_rate_map(const SimConfig& config, const TrialPlan& plan,
                                std::span<const double> first_grid,
                                std::span<const double> second_grid,
                                const GrowthOptions& options = {}) {
    require_increasing(first_grid, "first-ensemble input");
    require_increasing(second_grid, "second-ensemble input");
    if (plan.n_trials == 0) throw Error(ErrorCode::NoTrials, "n_trials must be at least 1");
    const bool intensity = options.kind == InputKind::Intensity;
    const double base = options.baseline_value.value_or(default_growth_baseline(options.kind));

    auto second_transmissivity = [&](double in1, double in2) {
        SimConfig c = config;
        c.params.delta = {0.0, 0.0};
        if (intensity) {
            c.probe.zeta0 = {in1, in2};
        } else {
            c.probe.g0 = {in1, in2};
        }
        const auto trials = run_trial_batch(validate_config(c), plan, 0, plan.n_trials);
        std::vector<double> t2(trials.size());
        for (std::size_t i = 0; i < trials.size(); ++i) t2[i] = trials[i].T[1];
        return t2;
    };
    auto mean = [](const std::vector<double>& v) {
        RunningStats s;
        for (double x : v) s.push(x);
        return s.mean();
    };

    // Denominators: one per row (SecondEnsemble) or per column (FirstEnsemble).
    std::vector<std::vector<double>> baselines;
    if (options.baseline == GrowthBaseline::SecondEnsemble) {
        for (double in1 : first_grid) baselines.push_back(second_transmissivity(in1, base));
    } else {
        for (double in2 : second_grid) baselines.push_back(second_transmissivity(base, in2));
    }

    SweepMap map;
    map.kind = intensity ? SweepKind::GrowthIntensity : SweepKind::GrowthCorrelation;
    map.x = {intensity ? "zeta2_mhz" : "g2_0", {second_grid.begin(), second_grid.end()}, intensity};
    map.y = {intensity ? "zeta1_mhz" : "g1_0", {first_grid.begin(), first_grid.end()}, intensity};
    for (std::size_t iy = 0; iy < first_grid.size(); ++iy) {
        for (std::size_t ix = 0; ix < second_grid.size(); ++ix) {
            const auto& denom = baselines[options.baseline == GrowthBaseline::SecondEnsemble ? iy : ix];
            const auto numer = second_transmissivity(first_grid[iy], second_grid[ix]);
            const double mn = mean(numer);
            const double md = mean(denom);
            const double ratio = mn / md;
            RunningStats linearized;
            for (std::size_t i = 0; i < numer.size(); ++i)
                linearized.push((numer[i] - ratio * denom[i]) / md);
            map.values.push_back(ratio - 1.0);
            map.sem.push_back(linearized.sem());
        }
    }
    return map;
}

}  // namespace rydeit
