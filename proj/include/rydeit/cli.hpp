// cli.hpp - Run manifests, command-line parsing, dispatch and result writers.
//
// A RunManifest captures everything that determines the output bytes of a
// run: the resolved configuration (file + --set overrides + --mode), seed,
// trial count, subcommand and its canonicalized arguments. The JSON sidecar
// written next to every CSV is exactly this manifest, so
// `rydeit replay run.json` regenerates run.csv byte for byte.

#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "config_io.hpp"
#include "core.hpp"
#include "experiments.hpp"
#include "montecarlo.hpp"
#include "validation.hpp"

namespace rydeit {

inline constexpr const char* kVersion = "rydeit 1.0.0";

struct RunManifest {
    std::string subcommand;
    std::string config_path;
    std::vector<std::string> overrides;
    ConfigValues config;
    std::uint64_t seed = 1;
    std::size_t trials = 2000;
    std::map<std::string, std::string> args;
    std::string version = kVersion;

    // Execution-only settings; they never change the output.
    std::string out;
    unsigned threads = 0;
};

/// --help / --version: carries the text to print, exit code 0.
struct HelpRequested {
    std::string text;
};

/// "lo:hi:count" in the axis' own units.
inline std::vector<double> parse_grid(const std::string& spec, ErrorCode failure = ErrorCode::UnknownFlag) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    double lo = 0, hi = 0, count = 0;
    if (parts.size() != 3 || !parse_double(parts[0], lo) || !parse_double(parts[1], hi) ||
        !parse_double(parts[2], count) || count < 1 || count != static_cast<double>(static_cast<long>(count)) ||
        (count > 1 && !(hi > lo)))
        throw Error(failure, "bad grid '" + spec + "' (expected lo:hi:count)");
    return linspace(lo, hi, static_cast<std::size_t>(count));
}

inline std::vector<double> parse_list(const std::string& spec, ErrorCode failure = ErrorCode::UnknownFlag) {
    std::vector<double> out;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) {
        double x = 0;
        if (!parse_double(item, x)) throw Error(failure, "bad value list '" + spec + "'");
        out.push_back(x);
    }
    if (out.empty()) throw Error(failure, "empty value list");
    return out;
}

inline void apply_override(ConfigValues& values, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw Error(ErrorCode::BadOverride, "expected key=value, got '" + assignment + "'");
    std::string key = assignment.substr(0, eq);
    set_value(values, key, std::string_view(assignment).substr(eq + 1), ErrorCode::BadOverride);
}

/// Fills subcommand defaults so the manifest records every argument explicitly.
inline void canonicalize_args(RunManifest& m) {
    auto& a = m.args;
    auto fill = [&](const std::string& key, const std::string& value) {
        if (!a.count(key) || a[key].empty()) a[key] = value;
    };
    if (m.subcommand == "spectrum") {
        fill("grid", "-8:8:161");
        fill("lock", "locked");
    } else if (m.subcommand == "cross-talk") {
        fill("kind", "intensity");
        fill("values", a["kind"] == "intensity" ? "0.1,0.7,1.2" : "0.1,1.0,5.0");
        fill("grid", "-8:8:161");
        fill("lock", "respective");
    } else if (m.subcommand == "diff-map") {
        fill("zeta1-grid", "0.01:1.2:21");
        fill("zeta2-grid", "0.01:1.2:21");
    } else if (m.subcommand == "growth") {
        fill("kind", "intensity");
        const bool intensity = a["kind"] == "intensity";
        fill("grid1", intensity ? "0.01:1.2:21" : "0.1:5:21");
        fill("grid2", intensity ? "0.01:1.2:21" : "0.1:5:21");
        fill("baseline", "ensemble2");
        fill("baseline-value", intensity ? "0.01" : "1");
    }
    // Validate argument syntax now so usage errors surface before any work.
    for (const char* key : {"grid", "zeta1-grid", "zeta2-grid", "grid1", "grid2"})
        if (a.count(key)) parse_grid(a[key]);
    if (a.count("values")) parse_list(a["values"]);
    if (a.count("baseline-value")) parse_list(a["baseline-value"]);
    auto one_of = [&](const std::string& key, std::initializer_list<const char*> allowed) {
        if (!a.count(key)) return;
        for (const char* v : allowed)
            if (a[key] == v) return;
        throw Error(ErrorCode::UnknownFlag, "bad value '" + a[key] + "' for --" + key);
    };
    one_of("lock", {"locked", "respective"});
    one_of("kind", {"intensity", "correlation"});
    one_of("baseline", {"ensemble2", "ensemble1"});
}

inline nlohmann::json manifest_to_json(const RunManifest& m);
inline RunManifest manifest_from_json(const nlohmann::json& j);

/// Parses argv into a manifest. Usage problems throw Error with UnknownFlag,
/// MissingConfig or BadOverride; --help throws HelpRequested.
inline RunManifest parse_cli(int argc, const char* const* argv) {
    CLI::App app{"Monte Carlo simulator of two coupled Rydberg-EIT ensembles", "rydeit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunManifest m;
    std::string mode;
    std::string manifest_path;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", m.config_path, "configuration file (key = value)");
        sub->add_option("--set", m.overrides, "override a config key, key=value (repeatable)");
        sub->add_option("--seed", m.seed, "master seed");
        sub->add_option("--trials", m.trials, "trials per grid point");
        sub->add_option("--mode", mode, "shared | independent | meanfield");
        sub->add_option("--out", m.out, "output prefix; writes <out>.csv and <out>.json");
        sub->add_option("--threads", m.threads, "worker threads (0 = all cores)");
    };
    auto arg = [&](CLI::App* sub, const std::string& name, const std::string& help) {
        sub->add_option("--" + name, m.args[name], help);
    };

    auto* spectrum = app.add_subcommand("spectrum", "transmission/correlation spectra vs probe detuning");
    add_common(spectrum);
    arg(spectrum, "grid", "detuning grid lo:hi:count in MHz");
    arg(spectrum, "lock", "locked (delta1 = delta2) | respective");

    auto* cross = app.add_subcommand("cross-talk", "spectra for several ensemble-1 inputs");
    add_common(cross);
    arg(cross, "kind", "intensity (vary zeta1) | correlation (vary g1)");
    arg(cross, "values", "comma-separated ensemble-1 inputs (MHz or g)");
    arg(cross, "grid", "detuning grid lo:hi:count in MHz");
    arg(cross, "lock", "respective | locked");

    auto* diff = app.add_subcommand("diff-map", "|T2 - T1| on resonance over (zeta1, zeta2)");
    add_common(diff);
    arg(diff, "zeta1-grid", "zeta1 grid lo:hi:count in MHz");
    arg(diff, "zeta2-grid", "zeta2 grid lo:hi:count in MHz");

    auto* growth = app.add_subcommand("growth", "growth rate of T2 over an input grid");
    add_common(growth);
    arg(growth, "kind", "intensity | correlation");
    arg(growth, "grid1", "ensemble-1 input grid lo:hi:count");
    arg(growth, "grid2", "ensemble-2 input grid lo:hi:count");
    arg(growth, "baseline", "ensemble2 (pin ensemble-2 input) | ensemble1");
    arg(growth, "baseline-value", "baseline input (MHz or g)");

    auto* validate = app.add_subcommand("validate", "analytic and statistical self-checks");
    add_common(validate);

    auto* replay = app.add_subcommand("replay", "re-run the manifest stored in a JSON sidecar");
    replay->add_option("manifest", manifest_path, "JSON sidecar")->required();
    replay->add_option("--out", m.out, "output prefix");
    replay->add_option("--threads", m.threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForVersion&) {
        throw HelpRequested{std::string(kVersion) + "\n"};
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorCode::UnknownFlag, e.what());
    }

    CLI::App* chosen = app.get_subcommands().front();
    if (chosen == replay) {
        std::ifstream in(manifest_path);
        if (!in) throw Error(ErrorCode::MissingConfig, "cannot open manifest '" + manifest_path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MissingConfig, std::string("bad manifest: ") + e.what());
        }
        RunManifest replayed = manifest_from_json(j);
        replayed.out = m.out;
        replayed.threads = m.threads;
        return replayed;
    }

    m.subcommand = chosen->get_name();
    std::erase_if(m.args, [&](const auto& kv) { return chosen->get_option_no_throw("--" + kv.first) == nullptr; });
    std::erase_if(m.args, [](const auto& kv) { return kv.second.empty(); });

    if (m.config_path.empty() && m.subcommand != "validate")
        throw Error(ErrorCode::MissingConfig, "--config is required for '" + m.subcommand + "'");
    m.config = m.config_path.empty() ? default_config_values() : load_config_file(m.config_path);
    for (const auto& o : m.overrides) apply_override(m.config, o);
    if (!mode.empty()) apply_override(m.config, "mode=" + mode);
    if (m.trials == 0) throw Error(ErrorCode::UnknownFlag, "--trials must be at least 1");
    canonicalize_args(m);
    return m;
}

inline nlohmann::json manifest_to_json(const RunManifest& m) {
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : m.config.numbers) cfg[k] = v;
    cfg["mode"] = m.config.mode;
    return {
        {"tool", "rydeit"},
        {"version", m.version},
        {"subcommand", m.subcommand},
        {"config_path", m.config_path},
        {"overrides", m.overrides},
        {"config", cfg},
        {"seed", m.seed},
        {"trials", m.trials},
        {"args", m.args},
    };
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
    try {
        RunManifest m;
        m.subcommand = j.at("subcommand").get<std::string>();
        m.config_path = j.value("config_path", "");
        m.overrides = j.value("overrides", std::vector<std::string>{});
        m.config = default_config_values();
        for (const auto& [k, v] : j.at("config").items()) {
            if (k == "mode") {
                m.config.mode = v.get<std::string>();
            } else {
                m.config.numbers[k] = v.get<double>();
            }
        }
        m.seed = j.at("seed").get<std::uint64_t>();
        m.trials = j.at("trials").get<std::size_t>();
        m.args = j.value("args", std::map<std::string, std::string>{});
        m.version = j.value("version", std::string(kVersion));
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MissingConfig, std::string("bad manifest: ") + e.what());
    }
}

struct CrossTalkResult {
    InputKind kind = InputKind::Intensity;
    std::vector<double> inputs;  // ensemble-1 input per series, internal units
    std::vector<SpectrumResult> spectra;
};

using RunResult = std::variant<SpectrumResult, CrossTalkResult, SweepMap, std::vector<OracleReport>>;

inline TrialPlan plan_for(const RunManifest& m, const SimConfig& config) {
    return TrialPlan{m.trials, m.seed, config.mode, m.threads};
}

inline std::vector<double> mhz_grid(const std::string& spec) {
    auto g = parse_grid(spec);
    for (double& x : g) x = mhz(x);
    return g;
}

/// Built-in self-check suite behind `validate`.
inline std::vector<OracleReport> run_validation(const SimConfig& config, const TrialPlan& plan) {
    std::vector<OracleReport> out;
    const PhysicsParams& p = config.params;

    const double im3 = alpha_tll(0.0, p.control_detuning[0], p.omega[0], p.gamma[0], p.gamma_r[0]).imag();
    const double closed = p.gamma[0] * p.gamma_r[0] / (p.gamma[0] * p.gamma_r[0] + p.omega[0] * p.omega[0]);
    if (p.control_detuning[0] == 0.0)
        out.push_back(make_report("Im alpha_TLL(0) vs gamma Gamma/(gamma Gamma + Omega^2)", im3, closed, 1e-15));
    const double w = p.omega[0] * p.omega[0];
    out.push_back(make_report("P at delta=0, W=Omega^2/n vs 1/2",
                              excitation_probability(w / config.n_sa, config.n_sa, p.omega[0], 0.0,
                                                     p.control_detuning[0], p.gamma[0]),
                              0.5, 1e-15));

    SimConfig weak = config;
    weak.probe.zeta0 = {mhz(0.01), mhz(0.01)};
    weak.probe.g0 = {1.0, 1.0};
    weak = validate_config(weak);
    const auto grid = linspace(mhz(-8.0), mhz(8.0), 33);
    out.push_back(weak_probe_spectrum_check(weak, plan, grid));

    const std::vector<double> probabilities{0.0, 0.05, 0.5, 0.95, 1.0};
    for (auto& r : sampling_statistics_check(probabilities, 100000, plan.master_seed)) out.push_back(r);
    for (auto& r : blockade_case_check(0.5, 0.5, 100000, plan.master_seed)) out.push_back(r);
    for (auto& r : blockade_case_check(0.3, 0.8, 100000, plan.master_seed)) out.push_back(r);

    for (double z : {0.0, 0.01, 1.0}) {
        SimConfig c = config;
        c.probe.zeta0 = {mhz(z), mhz(z)};
        c.params.delta = {0.0, 0.0};
        out.push_back(meanfield_cross_check(validate_config(c), plan));
    }
    return out;
}

inline RunResult execute(const RunManifest& m) {
    const SimConfig config = build_config(m.config);
    const TrialPlan plan = plan_for(m, config);
    const auto& a = m.args;
    auto lock_of = [](const std::string& s) {
        return s == "respective" ? DetuningLock::Respective : DetuningLock::Locked;
    };

    if (m.subcommand == "spectrum") {
        return spectrum_scan(config, plan, mhz_grid(a.at("grid")), lock_of(a.at("lock")));
    }
    if (m.subcommand == "cross-talk") {
        CrossTalkResult r;
        r.kind = a.at("kind") == "intensity" ? InputKind::Intensity : InputKind::Correlation;
        r.inputs = parse_list(a.at("values"));
        if (r.kind == InputKind::Intensity)
            for (double& x : r.inputs) x = mhz(x);
        r.spectra = cross_talk_scan(config, plan, r.inputs, r.kind, mhz_grid(a.at("grid")),
                                    lock_of(a.at("lock")));
        return r;
    }
    if (m.subcommand == "diff-map") {
        return transmissivity_diff_map(config, plan, mhz_grid(a.at("zeta1-grid")),
                                       mhz_grid(a.at("zeta2-grid")), config.probe.g0);
    }
    if (m.subcommand == "growth") {
        GrowthOptions opt;
        opt.kind = a.at("kind") == "intensity" ? InputKind::Intensity : InputKind::Correlation;
        opt.baseline = a.at("baseline") == "ensemble1" ? GrowthBaseline::FirstEnsemble
                                                       : GrowthBaseline::SecondEnsemble;
        const double base = parse_list(a.at("baseline-value")).front();
        const bool intensity = opt.kind == InputKind::Intensity;
        opt.baseline_value = intensity ? mhz(base) : base;
        auto g1 = intensity ? mhz_grid(a.at("grid1")) : parse_grid(a.at("grid1"));
        auto g2 = intensity ? mhz_grid(a.at("grid2")) : parse_grid(a.at("grid2"));
        return growth_rate_map(config, plan, g1, g2, opt);
    }
    if (m.subcommand == "validate") {
        return run_validation(config, plan);
    }
    throw Error(ErrorCode::UnknownFlag, "unknown subcommand '" + m.subcommand + "'");
}

namespace detail {

inline void write_spectrum_rows(std::ostream& os, const SpectrumResult& s, const std::string& prefix) {
    for (std::size_t i = 0; i < s.detunings.size(); ++i) {
        const auto& p = s.points[i];
        os << prefix << format_double(to_mhz(s.detunings[i]));
        for (int a = 0; a < 2; ++a)
            os << ',' << format_double(p.mean_T[a]) << ',' << format_double(p.sem_T[a]);
        for (int a = 0; a < 2; ++a)
            os << ',' << format_double(p.mean_G[a]) << ',' << format_double(p.sem_G[a]);
        os << '\n';
    }
}

inline const char* kSpectrumHeader = "detuning_mhz,T1,sem_T1,T2,sem_T2,G1,sem_G1,G2,sem_G2";

}  // namespace detail

/// CSV text for any run result: header row, '.' decimals, '\n' after every row.
inline std::string results_csv(const RunResult& result) {
    std::ostringstream os;
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, SpectrumResult>) {
                os << detail::kSpectrumHeader << '\n';
                detail::write_spectrum_rows(os, r, "");
            } else if constexpr (std::is_same_v<T, CrossTalkResult>) {
                const bool intensity = r.kind == InputKind::Intensity;
                os << (intensity ? "zeta1_mhz," : "g1_0,") << detail::kSpectrumHeader << '\n';
                for (std::size_t k = 0; k < r.spectra.size(); ++k) {
                    const double v = intensity ? to_mhz(r.inputs[k]) : r.inputs[k];
                    detail::write_spectrum_rows(os, r.spectra[k], format_double(v) + ",");
                }
            } else if constexpr (std::is_same_v<T, SweepMap>) {
                os << "x,y,value\n";
                for (std::size_t iy = 0; iy < r.y.values.size(); ++iy) {
                    for (std::size_t ix = 0; ix < r.x.values.size(); ++ix) {
                        const double x = r.x.frequency ? to_mhz(r.x.values[ix]) : r.x.values[ix];
                        const double y = r.y.frequency ? to_mhz(r.y.values[iy]) : r.y.values[iy];
                        os << format_double(x) << ',' << format_double(y) << ','
                           << format_double(r.at(iy, ix)) << '\n';
                    }
                }
            } else {
                os << "check,computed,oracle,abs_deviation,rel_deviation,tolerance,asserted,pass\n";
                for (const auto& rep : r) {
                    os << '"' << rep.name << "\"," << format_double(rep.computed) << ','
                       << format_double(rep.oracle) << ',' << format_double(rep.abs_deviation) << ','
                       << format_double(rep.rel_deviation) << ',' << format_double(rep.tolerance) << ','
                       << (rep.asserted ? "yes" : "no") << ',' << (rep.pass ? "pass" : "FAIL") << '\n';
                }
            }
        },
        result);
    return os.str();
}

inline bool run_succeeded(const RunResult& result) {
    if (const auto* reports = std::get_if<std::vector<OracleReport>>(&result)) return all_pass(*reports);
    return true;
}

/// Writes <out>.csv and the manifest sidecar <out>.json. With an empty
/// destination the CSV goes to stdout and no sidecar is written.
inline void write_results(const RunResult& result, const RunManifest& manifest,
                          const std::string& destination) {
    const std::string csv = results_csv(result);
    if (destination.empty()) {
        std::cout << csv;
        return;
    }
    auto write = [](const std::string& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + path + "'");
        out << text;
        if (!out) throw Error(ErrorCode::IoFailure, "write failed for '" + path + "'");
    };
    write(destination + ".csv", csv);
    write(destination + ".json", manifest_to_json(manifest).dump(2) + "\n");
}

}  // namespace rydeit
