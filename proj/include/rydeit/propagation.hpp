// propagation.hpp - One Monte Carlo realization through the paired superatom chain.
//
// Cell i of ensemble 1 and cell i of ensemble 2 sit in the same shared blockade
// region. For each pair we compute both excitation probabilities from the
// local field, decide which superatoms hold a Rydberg excitation, and then
// advance intensity and correlation across the cell with the exact
// exponential solution for that outcome.

#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "core.hpp"
#include "optics.hpp"
#include "random.hpp"

namespace rydeit {

/// Effective projection values assigned to the two superatoms of one cell pair.
struct CellOutcome {
    PerEnsemble p_eff{0.0, 0.0};
};

/// Decides the cell-pair outcome from probabilities P1, P2 and uniforms u1, u2.
/// A superatom is excited when u < P. In SharedBlockade mode at most one
/// excitation survives: if both fire, the larger probability wins and an exact
/// tie gives (0.5, 0.5).
inline CellOutcome sample_blockade_pair(double p1, double p2, double u1, double u2,
                                        CouplingMode mode) {
    switch (mode) {
        case CouplingMode::MeanField:
            return {{p1, p2}};
        case CouplingMode::Independent:
            return {{u1 < p1 ? 1.0 : 0.0, u2 < p2 ? 1.0 : 0.0}};
        case CouplingMode::SharedBlockade:
            break;
    }
    const bool fire1 = u1 < p1;
    const bool fire2 = u2 < p2;
    if (!fire1 && !fire2) return {{0.0, 0.0}};
    if (fire1 && !fire2) return {{1.0, 0.0}};
    if (!fire1 && fire2) return {{0.0, 1.0}};
    if (p1 > p2) return {{1.0, 0.0}};
    if (p2 > p1) return {{0.0, 1.0}};
    return {{0.5, 0.5}};
}

/// Which branch of the shared-blockade rule a draw falls in:
/// I  neither superatom fires, II exactly one fires, III both fire.
enum class BlockadeCase { None, One, Both };

inline BlockadeCase classify_blockade_case(double p1, double p2, double u1, double u2) {
    const int fired = (u1 < p1 ? 1 : 0) + (u2 < p2 ? 1 : 0);
    return fired == 0 ? BlockadeCase::None : fired == 1 ? BlockadeCase::One : BlockadeCase::Both;
}

using PairOptics = std::array<EnsembleOptics, 2>;

inline PairOptics pair_optics(const PhysicsParams& params) {
    return {ensemble_optics(params, 0), ensemble_optics(params, 1)};
}

/// Advances (W, g) of both ensembles across one cell with the projection held
/// at the sampled outcome:
///   W <- W exp(-od_cell Im[alpha_hat]),  g <- g exp(-od_cell P Im[alpha_TLA - alpha_TLL]).
inline PropagationState step_cell(const PropagationState& state, const CellOutcome& outcome,
                                  const PairOptics& optics, double od_cell) {
    PropagationState next = state;
    for (int a = 0; a < 2; ++a) {
        const double p = outcome.p_eff[a];
        const Polarizability alpha = conditional_alpha(p, optics[a].two_level, optics[a].ladder);
        next.W[a] = state.W[a] * std::exp(-od_cell * alpha.imag());
        const double contrast = (optics[a].two_level - optics[a].ladder).imag();
        next.g[a] = state.g[a] * std::exp(-od_cell * p * contrast);
    }
    next.cell_index = state.cell_index + 1;
    return next;
}

inline PropagationState step_cell(const PropagationState& state, const CellOutcome& outcome,
                                  const PhysicsParams& params, double od_cell) {
    return step_cell(state, outcome, pair_optics(params), od_cell);
}

/// Per-realization observables. T and G fall back to 1 (and are flagged) when
/// the corresponding input vanishes.
struct Observables {
    PerEnsemble T{1.0, 1.0};
    PerEnsemble G{1.0, 1.0};
    std::array<bool, 2> zero_input{false, false};
};

/// Which uniform of each per-cell draw pair goes to which ensemble. Mirrored
/// hands the first draw to ensemble 2, which makes the pair (Forward,
/// Mirrored) exactly swap-equivariant.
enum class DrawOrder { Forward, Mirrored };

struct NoObserver {
    void operator()(const PropagationState&, const CellOutcome&, const PerEnsemble&) const {}
};

/// Runs one realization through all cells, calling
/// `observer(state_before, outcome, probabilities)` for every cell pair.
/// Draws are consumed two per cell, in increasing z; MeanField draws nothing.
template <class Observer = NoObserver>
Observables run_realization(const SimConfig& config, CouplingMode mode, TrialStream& rng,
                            DrawOrder order = DrawOrder::Forward, Observer&& observer = {}) {
    const PairOptics optics = pair_optics(config.params);
    const PhysicsParams& par = config.params;

    PropagationState state;
    for (int a = 0; a < 2; ++a) {
        state.W[a] = config.probe.zeta0[a] * config.probe.zeta0[a];
        state.g[a] = config.probe.g0[a];
    }
    const PropagationState input = state;

    for (int cell = 0; cell < config.cells; ++cell) {
        PerEnsemble prob;
        for (int a = 0; a < 2; ++a) {
            // Mean-field substitution: the superatom sees <E+E> g.
            prob[a] = excitation_probability(state.W[a] * state.g[a], config.n_sa, par.omega[a],
                                             par.delta[a], par.control_detuning[a], par.gamma[a]);
        }
        double u1 = 0.0, u2 = 0.0;
        if (mode != CouplingMode::MeanField) {
            const double first = rng.uniform();
            const double second = rng.uniform();
            if (order == DrawOrder::Forward) {
                u1 = first;
                u2 = second;
            } else {
                u1 = second;
                u2 = first;
            }
        }
        const CellOutcome outcome = sample_blockade_pair(prob[0], prob[1], u1, u2, mode);
        observer(std::as_const(state), outcome, std::as_const(prob));
        state = step_cell(state, outcome, optics, config.od_cell);
    }

    Observables obs;
    for (int a = 0; a < 2; ++a) {
        if (input.W[a] > 0.0) {
            obs.T[a] = state.W[a] / input.W[a];
        } else {
            obs.zero_input[a] = true;
        }
        if (input.W[a] > 0.0 && input.g[a] > 0.0) {
            obs.G[a] = state.g[a] / input.g[a];
        } else {
            obs.zero_input[a] = true;
        }
    }
    return obs;
}

}  // namespace rydeit
