// optics.hpp - Superatom excitation probability and conditional polarizability.
//
// Every kernel here is a ratio of homogeneous polynomials in the frequencies,
// so multiplying all frequencies (and sqrt(W)) by one positive factor leaves
// the result unchanged.

#pragma once

#include <algorithm>
#include <complex>

#include "core.hpp"

namespace rydeit {

using Polarizability = std::complex<double>;

/// Upper clamp for sampled probabilities, keeps `u < P` meaningful when
/// rounding pushes P to 1.
inline constexpr double kProbabilityCeiling = 1.0 - 1e-12;

/// Two-level polarizability i*gamma / (gamma + i*delta).
inline Polarizability alpha_tla(double delta, double gamma) {
    if (!(gamma > 0.0)) throw Error(ErrorCode::NonPositiveGamma, "alpha_tla needs gamma > 0");
    const std::complex<double> i{0.0, 1.0};
    return i * gamma / (gamma + i * delta);
}

/// Ladder (EIT) polarizability
///   i*gamma / (gamma + i*delta + Omega^2 / (Gamma + i*(delta + Delta))).
inline Polarizability alpha_tll(double delta, double control_detuning, double omega,
                                double gamma, double gamma_r) {
    if (!(gamma > 0.0)) throw Error(ErrorCode::NonPositiveGamma, "alpha_tll needs gamma > 0");
    const std::complex<double> i{0.0, 1.0};
    const double two_photon = delta + control_detuning;
    if (gamma_r == 0.0 && two_photon == 0.0) {
        // Omega^2 / 0: with a drive the response is fully suppressed (ideal EIT).
        if (omega == 0.0)
            throw Error(ErrorCode::DegenerateDenominator, "Gamma = delta + Delta = Omega = 0");
        return {0.0, 0.0};
    }
    const std::complex<double> dressing = omega * omega / (gamma_r + i * two_photon);
    return i * gamma / (gamma + i * delta + dressing);
}

/// P * alpha_TLA + (1 - P) * alpha_TLL.
inline Polarizability conditional_alpha(double p, Polarizability alpha2, Polarizability alpha3) {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::ProbabilityOutOfRange, "projection must lie in [0, 1]");
    return p * alpha2 + (1.0 - p) * alpha3;
}

/// Steady-state Rydberg excitation probability of one superatom of n_sa atoms
/// driven by a probe of intensity proxy W (= zeta^2):
///   n W Omega^2 / (n W Omega^2 + [Omega^2 - delta (delta + Delta)]^2 + delta^2 gamma^2)
/// The result is clamped to [0, kProbabilityCeiling].
inline double excitation_probability(double W, double n_sa, double omega, double delta,
                                     double control_detuning, double gamma) {
    if (!(W >= 0.0)) throw Error(ErrorCode::NegativeIntensity, "intensity must be nonnegative");
    const double drive = n_sa * W * omega * omega;
    if (drive == 0.0) return 0.0;
    const double light_shift = omega * omega - delta * (delta + control_detuning);
    const double loss = delta * gamma;
    const double p = drive / (drive + light_shift * light_shift + loss * loss);
    return std::clamp(p, 0.0, kProbabilityCeiling);
}

/// Both polarizabilities of one ensemble, evaluated once per configuration.
struct EnsembleOptics {
    Polarizability two_level;
    Polarizability ladder;
};

inline EnsembleOptics ensemble_optics(const PhysicsParams& params, int a) {
    return {alpha_tla(params.delta[a], params.gamma[a]),
            alpha_tll(params.delta[a], params.control_detuning[a], params.omega[a],
                      params.gamma[a], params.gamma_r[a])};
}

}  // namespace rydeit
