// core.hpp - Domain types, configuration validation and derived discretization
// for the paired Rydberg-EIT superatom chain.
//
// All frequencies inside SimConfig are angular frequencies in rad/us. Lengths
// are in um and densities in um^-3. Conversions from the "x/2pi in MHz" values
// used in configuration files happen in the helpers below.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rydeit {

enum class ErrorCode {
    InvalidGeometry,
    NonPositiveRate,
    NegativeInput,
    NonPositiveFactor,
    NonPositiveGamma,
    DegenerateDenominator,
    ProbabilityOutOfRange,
    NegativeIntensity,
    NoTrials,
    InsufficientDraws,
    BadConfig,
    IoFailure,
    UnknownFlag,
    MissingConfig,
    BadOverride,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidGeometry: return "InvalidGeometry";
        case ErrorCode::NonPositiveRate: return "NonPositiveRate";
        case ErrorCode::NegativeInput: return "NegativeInput";
        case ErrorCode::NonPositiveFactor: return "NonPositiveFactor";
        case ErrorCode::NonPositiveGamma: return "NonPositiveGamma";
        case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
        case ErrorCode::NegativeIntensity: return "NegativeIntensity";
        case ErrorCode::NoTrials: return "NoTrials";
        case ErrorCode::InsufficientDraws: return "InsufficientDraws";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::UnknownFlag: return "UnknownFlag";
        case ErrorCode::MissingConfig: return "MissingConfig";
        case ErrorCode::BadOverride: return "BadOverride";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Converts a frequency quoted as nu = omega/2pi in MHz to rad/us.
constexpr double mhz(double nu_mhz) { return kTwoPi * nu_mhz; }
constexpr double khz(double nu_khz) { return kTwoPi * nu_khz * 1e-3; }
/// Inverse of mhz(): rad/us back to the MHz value of omega/2pi.
constexpr double to_mhz(double omega) { return omega / kTwoPi; }

// Per-ensemble quantities are indexed 0 (first ensemble) and 1 (second).
using PerEnsemble = std::array<double, 2>;

struct PhysicsParams {
    PerEnsemble omega{mhz(2.5), mhz(2.5)};        // control Rabi frequency
    PerEnsemble gamma{mhz(3.0), mhz(3.0)};        // |e> dephasing
    PerEnsemble gamma_r{khz(10.0), khz(10.0)};    // |r> dephasing
    PerEnsemble delta{0.0, 0.0};                  // probe detuning
    PerEnsemble control_detuning{0.0, 0.0};       // control detuning Delta
};

struct Geometry {
    double length_um = 1000.0;
    double radius_um = 0.5;
    double separation_um = 0.5;
    double blockade_radius_um = 14.68;
    double density_per_um3 = 0.15;   // 1.5e8 mm^-3
    double optical_depth = 43.5;     // kappa * L over the whole medium
    double c6_ghz_um6 = 140.0;       // carried as metadata only

    double cell_length_um() const { return 2.0 * blockade_radius_um; }

    /// Number of superatom cells; the fractional remainder of L is dropped.
    int cell_count() const {
        return static_cast<int>(std::floor(length_um / cell_length_um()));
    }

    /// Atoms in one cylindrical cell of radius r and length 2 R_b.
    double atoms_per_superatom() const {
        return density_per_um3 * std::numbers::pi * radius_um * radius_um * cell_length_um();
    }

    /// The whole optical depth is spread over the simulated cells.
    double od_per_cell() const { return optical_depth / cell_count(); }
};

struct ProbeInput {
    PerEnsemble zeta0{mhz(0.1), mhz(0.1)};  // input probe Rabi amplitude
    PerEnsemble g0{1.0, 1.0};               // input two-photon correlation
};

enum class CouplingMode { SharedBlockade, Independent, MeanField };

inline std::string_view to_string(CouplingMode mode) {
    switch (mode) {
        case CouplingMode::SharedBlockade: return "shared";
        case CouplingMode::Independent: return "independent";
        case CouplingMode::MeanField: return "meanfield";
    }
    return "shared";
}

inline CouplingMode parse_mode(std::string_view text) {
    if (text == "shared" || text == "SharedBlockade") return CouplingMode::SharedBlockade;
    if (text == "independent" || text == "Independent") return CouplingMode::Independent;
    if (text == "meanfield" || text == "MeanField") return CouplingMode::MeanField;
    throw Error(ErrorCode::BadConfig, "unknown coupling mode '" + std::string(text) + "'");
}

/// Local field state at a cell boundary. W is the intensity proxy zeta^2.
struct PropagationState {
    PerEnsemble W{0.0, 0.0};
    PerEnsemble g{1.0, 1.0};
    int cell_index = 0;
};

/// Validated, immutable-by-convention configuration. Only validate_config()
/// and frequency_scale() produce these.
struct SimConfig {
    PhysicsParams params;
    Geometry geometry;
    ProbeInput probe;
    CouplingMode mode = CouplingMode::SharedBlockade;

    int cells = 0;
    double n_sa = 0.0;
    double od_cell = 0.0;
};

inline SimConfig validate_config(const PhysicsParams& params, const Geometry& geom,
                                 const ProbeInput& probe, CouplingMode mode) {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(geom.length_um) || !finite(geom.blockade_radius_um) || geom.blockade_radius_um <= 0.0)
        throw Error(ErrorCode::InvalidGeometry, "blockade radius must be positive");
    if (geom.length_um < geom.cell_length_um())
        throw Error(ErrorCode::InvalidGeometry, "medium shorter than one cell (L < 2 R_b)");
    if (!(geom.radius_um > 0.0) || !(geom.density_per_um3 > 0.0))
        throw Error(ErrorCode::InvalidGeometry, "radius and density must be positive");
    if (!(geom.optical_depth > 0.0) || !finite(geom.optical_depth))
        throw Error(ErrorCode::InvalidGeometry, "optical depth must be positive");
    if (geom.separation_um < 0.0)
        throw Error(ErrorCode::InvalidGeometry, "separation must be nonnegative");

    for (int a = 0; a < 2; ++a) {
        if (!(params.gamma[a] > 0.0) || !finite(params.gamma[a]))
            throw Error(ErrorCode::NonPositiveRate, "gamma must be positive");
        if (!(params.omega[a] > 0.0) || !finite(params.omega[a]))
            throw Error(ErrorCode::NonPositiveRate, "control Rabi frequency must be positive");
        if (!(params.gamma_r[a] >= 0.0) || !finite(params.gamma_r[a]))
            throw Error(ErrorCode::NonPositiveRate, "Rydberg dephasing must be nonnegative");
        if (!finite(params.delta[a]) || !finite(params.control_detuning[a]))
            throw Error(ErrorCode::BadConfig, "detunings must be finite");
        if (!(probe.zeta0[a] >= 0.0) || !finite(probe.zeta0[a]))
            throw Error(ErrorCode::NegativeInput, "input probe amplitude must be nonnegative");
        if (!(probe.g0[a] >= 0.0) || !finite(probe.g0[a]))
            throw Error(ErrorCode::NegativeInput, "input correlation must be nonnegative");
    }

    SimConfig cfg{params, geom, probe, mode};
    cfg.cells = geom.cell_count();
    cfg.n_sa = geom.atoms_per_superatom();
    cfg.od_cell = geom.od_per_cell();
    return cfg;
}

inline SimConfig validate_config(const SimConfig& raw) {
    return validate_config(raw.params, raw.geometry, raw.probe, raw.mode);
}

/// Multiplies every frequency (detunings, Rabi frequencies, dephasings and the
/// input probe amplitude) by `factor`. Geometry and optical depth are untouched.
inline SimConfig frequency_scale(const SimConfig& config, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw Error(ErrorCode::NonPositiveFactor, "scale factor must be positive");
    SimConfig out = config;
    for (int a = 0; a < 2; ++a) {
        out.params.omega[a] *= factor;
        out.params.gamma[a] *= factor;
        out.params.gamma_r[a] *= factor;
        out.params.delta[a] *= factor;
        out.params.control_detuning[a] *= factor;
        out.probe.zeta0[a] *= factor;
    }
    return out;
}

/// Symmetric defaults for both ensembles.
inline SimConfig default_config() {
    return validate_config(PhysicsParams{}, Geometry{}, ProbeInput{}, CouplingMode::SharedBlockade);
}

}  // namespace rydeit
