// validation.hpp - Analytic limits and sampling checks used by tests and `validate`.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "experiments.hpp"
#include "montecarlo.hpp"
#include "optics.hpp"
#include "propagation.hpp"
#include "random.hpp"

namespace rydeit {

struct OracleReport {
    std::string name;
    double computed = 0.0;
    double oracle = 0.0;
    double abs_deviation = 0.0;
    double rel_deviation = 0.0;
    double tolerance = 0.0;
    bool asserted = true;  // informational checks never fail a run
    bool pass = true;
};

/// Builds a report whose pass flag is |computed - oracle| <= tolerance.
inline OracleReport make_report(std::string name, double computed, double oracle, double tolerance,
                                bool asserted = true) {
    OracleReport r;
    r.name = std::move(name);
    r.computed = computed;
    r.oracle = oracle;
    r.abs_deviation = std::abs(computed - oracle);
    r.rel_deviation = oracle != 0.0 ? r.abs_deviation / std::abs(oracle) : r.abs_deviation;
    r.tolerance = tolerance;
    r.asserted = asserted;
    r.pass = !asserted || r.abs_deviation <= tolerance;
    return r;
}

inline bool all_pass(std::span<const OracleReport> reports) {
    return std::all_of(reports.begin(), reports.end(), [](const OracleReport& r) { return r.pass; });
}

/// Linear-EIT transmission exp(-OD Im alpha_TLL(delta)) of ensemble `a` at
/// each probe detuning in `grid`; the P -> 0 limit of the simulator.
inline std::vector<double> weak_probe_transmission(const PhysicsParams& params, const Geometry& geom,
                                                   std::span<const double> grid, int a = 0) {
    std::vector<double> out;
    out.reserve(grid.size());
    for (double delta : grid) {
        const Polarizability alpha = alpha_tll(delta, params.control_detuning[a], params.omega[a],
                                               params.gamma[a], params.gamma_r[a]);
        out.push_back(std::exp(-geom.optical_depth * alpha.imag()));
    }
    return out;
}

/// Independent-mode sampling: the empirical excitation rate for each P must lie
/// within 3 binomial standard deviations of P.
inline std::vector<OracleReport> sampling_statistics_check(std::span<const double> probabilities,
                                                           std::size_t n_draws,
                                                           std::uint64_t seed = 1) {
    if (n_draws < 10000) throw Error(ErrorCode::InsufficientDraws, "need at least 1e4 draws");
    std::vector<OracleReport> out;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        const double p = probabilities[k];
        TrialStream rng(seed, k);
        double fired = 0.0;
        for (std::size_t i = 0; i < n_draws; ++i) {
            const double u1 = rng.uniform();
            const double u2 = rng.uniform();
            const CellOutcome o = sample_blockade_pair(p, p, u1, u2, CouplingMode::Independent);
            fired += o.p_eff[0];
        }
        const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n_draws));
        out.push_back(make_report("independent excitation rate P=" + std::to_string(p),
                                  fired / static_cast<double>(n_draws), p, 3.0 * sigma));
    }
    return out;
}

/// Shared-blockade case frequencies for fixed (P1, P2) against the product
/// rule: none = (1-P1)(1-P2), both = P1 P2, one = the remainder. Also reports
/// how often the sampled outcome disagrees with the case (must be never).
inline std::vector<OracleReport> blockade_case_check(double p1, double p2, std::size_t n_draws,
                                                     std::uint64_t seed = 1) {
    if (n_draws < 10000) throw Error(ErrorCode::InsufficientDraws, "need at least 1e4 draws");
    TrialStream rng(seed, 0);
    std::array<double, 3> counts{};
    double inconsistent = 0.0;
    for (std::size_t i = 0; i < n_draws; ++i) {
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        const BlockadeCase c = classify_blockade_case(p1, p2, u1, u2);
        const CellOutcome o = sample_blockade_pair(p1, p2, u1, u2, CouplingMode::SharedBlockade);
        const double total = o.p_eff[0] + o.p_eff[1];
        counts[static_cast<int>(c)] += 1.0;
        if ((c == BlockadeCase::None) != (total == 0.0) || total > 1.0) inconsistent += 1.0;
    }
    const double n = static_cast<double>(n_draws);
    const std::array<double, 3> expected{(1 - p1) * (1 - p2), p1 * (1 - p2) + p2 * (1 - p1), p1 * p2};
    const std::array<const char*, 3> names{"case I (none)", "case II (one)", "case III (both)"};
    std::vector<OracleReport> out;
    const std::string tag = " P=(" + std::to_string(p1) + "," + std::to_string(p2) + ")";
    for (int k = 0; k < 3; ++k) {
        const double sigma = std::sqrt(expected[k] * (1.0 - expected[k]) / n);
        out.push_back(make_report(std::string("shared ") + names[k] + tag, counts[k] / n, expected[k],
                                  3.0 * sigma));
    }
    out.push_back(make_report("shared outcome consistency" + tag, inconsistent, 0.0, 0.0));
    return out;
}

/// Largest |T_MC - T_analytic| of an Independent-mode weak-probe spectrum.
/// A point passes when the deviation is within 3 SEM (plus a 1e-12 rounding
/// allowance for points where no trial fired) and within `abs_tol`.
inline OracleReport weak_probe_spectrum_check(const SimConfig& config, const TrialPlan& plan,
                                              std::span<const double> grid, double abs_tol = 1e-3) {
    TrialPlan independent = plan;
    independent.mode = CouplingMode::Independent;
    const SpectrumResult spectrum = spectrum_scan(config, independent, grid, DetuningLock::Locked);
    OracleReport worst;
    worst.name = "weak-probe spectrum vs exp(-OD Im alpha_TLL)";
    worst.tolerance = abs_tol;
    bool pass = true;
    for (int a = 0; a < 2; ++a) {
        const auto analytic = weak_probe_transmission(config.params, config.geometry, grid, a);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double sim = spectrum.points[i].mean_T[a];
            const double dev = std::abs(sim - analytic[i]);
            const double stat_tol = 3.0 * spectrum.points[i].sem_T[a] + 1e-12;
            if (dev > abs_tol || dev > stat_tol) pass = false;
            if (dev >= worst.abs_deviation) {
                worst.computed = sim;
                worst.oracle = analytic[i];
                worst.abs_deviation = dev;
                worst.rel_deviation = analytic[i] != 0.0 ? dev / analytic[i] : dev;
            }
        }
    }
    worst.pass = pass;
    return worst;
}

/// Compares the deterministic MeanField trajectory with the Independent-mode
/// Monte Carlo mean of T1. Informational: the two agree only to the extent
/// that exp(-od_cell P) linearizes, so the deviation is reported, not asserted.
inline OracleReport meanfield_cross_check(const SimConfig& config, const TrialPlan& plan) {
    TrialPlan mf = plan;
    mf.mode = CouplingMode::MeanField;
    mf.n_trials = 1;
    TrialPlan mc = plan;
    mc.mode = CouplingMode::Independent;
    const AggregateObservables a = run_trials(config, mf);
    const AggregateObservables b = run_trials(config, mc);
    return make_report("meanfield vs independent T1 at zeta1=" +
                           std::to_string(to_mhz(config.probe.zeta0[0])) + " MHz",
                       b.mean_T[0], a.mean_T[0], 0.0, false);
}

}  // namespace rydeit
