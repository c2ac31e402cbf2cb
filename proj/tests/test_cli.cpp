#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rydeit/cli.hpp"

using namespace rydeit;
namespace fs = std::filesystem;

namespace {

RunManifest parse(std::vector<std::string> args) {
    args.insert(args.begin(), "rydeit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse_cli(static_cast<int>(argv.size()), argv.data());
}

ErrorCode parse_error(std::vector<std::string> args) {
    try {
        parse(std::move(args));
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected a parse error";
    return ErrorCode::BadConfig;
}

fs::path scratch_dir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    fs::path dir = fs::temp_directory_path() / ("rydeit_cli_" + std::string(info->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "run.cfg";
    std::ofstream(p) << text;
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RYDEIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::string kPreset = std::string(RYDEIT_PRESET_DIR) + "/fig2.cfg";

}  // namespace

TEST(ConfigText, ParsesAliasesCommentsAndMode) {
    const auto v = parse_config_text("# header\nomega_mhz = 4   # both\nzeta1_mhz=0.7\n\nmode = independent\n");
    EXPECT_EQ(v.numbers.at("omega1_mhz"), 4.0);
    EXPECT_EQ(v.numbers.at("omega2_mhz"), 4.0);
    EXPECT_EQ(v.numbers.at("zeta1_mhz"), 0.7);
    EXPECT_EQ(v.numbers.at("zeta2_mhz"), 0.1);
    EXPECT_EQ(v.mode, "independent");
    const SimConfig c = build_config(v);
    EXPECT_DOUBLE_EQ(to_mhz(c.params.omega[1]), 4.0);
    EXPECT_EQ(c.mode, CouplingMode::Independent);
}

TEST(ConfigText, ReportsLineOfBadEntry) {
    try {
        parse_config_text("od = 5\nbogus = 1\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadConfig);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    EXPECT_THROW(parse_config_text("od = five\n"), Error);
    EXPECT_THROW(parse_config_text("od 5\n"), Error);
}

TEST(ConfigText, BuildConvertsUnits) {
    const SimConfig c = build_config(default_config_values());
    const SimConfig d = default_config();
    EXPECT_EQ(c.cells, d.cells);
    EXPECT_NEAR(c.n_sa, d.n_sa, 1e-12);
    EXPECT_DOUBLE_EQ(c.params.gamma_r[0], d.params.gamma_r[0]);
    EXPECT_DOUBLE_EQ(c.geometry.length_um, 1000.0);
}

TEST(ConfigText, SerializeParseRoundTripIsExact) {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.001, 10.0);
    for (int i = 0; i < 200; ++i) {
        ConfigValues v = default_config_values();
        for (auto& [key, value] : v.numbers) value = u(gen);
        v.mode = std::array{"shared", "independent", "meanfield"}[i % 3];
        const ConfigValues back = parse_config_text(serialize_config(v));
        EXPECT_EQ(back.numbers, v.numbers);
        EXPECT_EQ(back.mode, v.mode);
        EXPECT_EQ(serialize_config(back), serialize_config(v));
    }
}

TEST(ConfigText, ValuesFromConfigInvertBuild) {
    const SimConfig c = build_config(parse_config_text("zeta1_mhz = 0.7\ng2_0 = 3\nod = 5\n"));
    const SimConfig back = build_config(config_values_from(c));
    EXPECT_NEAR(back.probe.zeta0[0], c.probe.zeta0[0], 1e-12);
    EXPECT_EQ(back.probe.g0[1], 3.0);
    EXPECT_EQ(back.cells, c.cells);
}

TEST(ParseCli, SpectrumDefaultsAreCanonicalized) {
    const auto m = parse({"spectrum", "--config", kPreset, "--seed", "7", "--trials", "10"});
    EXPECT_EQ(m.subcommand, "spectrum");
    EXPECT_EQ(m.seed, 7u);
    EXPECT_EQ(m.trials, 10u);
    EXPECT_EQ(m.args.at("grid"), "-8:8:161");
    EXPECT_EQ(m.args.at("lock"), "locked");
}

TEST(ParseCli, OverridesAndModeApply) {
    const auto m = parse({"spectrum", "--config", kPreset, "--set", "zeta1_mhz=0.9", "--set", "g_0=2",
                          "--mode", "meanfield"});
    EXPECT_EQ(m.config.numbers.at("zeta1_mhz"), 0.9);
    EXPECT_EQ(m.config.numbers.at("g2_0"), 2.0);
    EXPECT_EQ(m.config.mode, "meanfield");
}

TEST(ParseCli, UsageErrors) {
    EXPECT_EQ(parse_error({"spectrum", "--config", kPreset, "--set", "zeta1_mhz=abc"}), ErrorCode::BadOverride);
    EXPECT_EQ(parse_error({"spectrum", "--config", kPreset, "--set", "nosuchkey=1"}), ErrorCode::BadOverride);
    EXPECT_EQ(parse_error({"spectrum", "--config", kPreset, "--set", "zeta1_mhz"}), ErrorCode::BadOverride);
    EXPECT_EQ(parse_error({"spectrum"}), ErrorCode::MissingConfig);
    EXPECT_EQ(parse_error({"spectrum", "--config", kPreset, "--bogus"}), ErrorCode::UnknownFlag);
    EXPECT_EQ(parse_error({"spectrum", "--config", kPreset, "--grid", "1:0:5"}), ErrorCode::UnknownFlag);
    EXPECT_EQ(parse_error({"growth", "--config", kPreset, "--kind", "phase"}), ErrorCode::UnknownFlag);
    EXPECT_EQ(parse_error({"frobnicate"}), ErrorCode::UnknownFlag);
    EXPECT_EQ(parse_error({"spectrum", "--config", kPreset, "--mode", "quantum"}), ErrorCode::BadOverride);
}

TEST(ParseCli, ValidateRunsWithoutConfig) {
    const auto m = parse({"validate", "--trials", "50"});
    EXPECT_EQ(m.subcommand, "validate");
    EXPECT_EQ(m.config.numbers, default_config_values().numbers);
}

TEST(ParseCli, HelpIsNotAnError) {
    EXPECT_THROW(parse({"--help"}), HelpRequested);
    EXPECT_THROW(parse({"--version"}), HelpRequested);
}

TEST(Manifest, JsonRoundTrip) {
    auto m = parse({"growth", "--config", kPreset, "--kind", "correlation", "--seed", "11", "--set", "od=6"});
    const RunManifest back = manifest_from_json(nlohmann::json::parse(manifest_to_json(m).dump()));
    EXPECT_EQ(back.subcommand, m.subcommand);
    EXPECT_EQ(back.config.numbers, m.config.numbers);
    EXPECT_EQ(back.config.mode, m.config.mode);
    EXPECT_EQ(back.seed, 11u);
    EXPECT_EQ(back.args, m.args);
    EXPECT_EQ(back.args.at("grid1"), "0.1:5:21");
    EXPECT_EQ(back.args.at("baseline-value"), "1");
}

TEST(Execute, SameManifestGivesIdenticalCsv) {
    auto m = parse({"spectrum", "--config", kPreset, "--trials", "20", "--grid", "-2:2:5"});
    const std::string a = results_csv(execute(m));
    m.threads = 1;
    const std::string b = results_csv(execute(m));
    EXPECT_EQ(a, b);
    EXPECT_EQ(line_count(a), 6u);
    EXPECT_EQ(a.substr(0, a.find('\n')), "detuning_mhz,T1,sem_T1,T2,sem_T2,G1,sem_G1,G2,sem_G2");
}

TEST(Execute, CrossTalkAndMapShapes) {
    const auto cross = results_csv(execute(parse({"cross-talk", "--config", kPreset, "--trials", "5",
                                                  "--grid", "-1:1:3"})));
    EXPECT_EQ(line_count(cross), 1u + 3u * 3u);
    EXPECT_EQ(cross.rfind("zeta1_mhz,", 0), 0u);

    const auto diff = results_csv(execute(parse({"diff-map", "--config", kPreset, "--trials", "5",
                                                 "--zeta1-grid", "0.1:1:3", "--zeta2-grid", "0.1:1:4"})));
    EXPECT_EQ(line_count(diff), 1u + 12u);
    EXPECT_EQ(diff.rfind("x,y,value\n", 0), 0u);
}

TEST(Binary, SpectrumWritesCsvAndSidecarThenReplaysByteIdentically) {
    const fs::path dir = scratch_dir();
    const std::string out = (dir / "spec").string();
    ASSERT_EQ(run_cli("spectrum --config " + kPreset + " --trials 4 --seed 3 --out " + out), 0);
    const std::string csv = read_file(out + ".csv");
    EXPECT_EQ(line_count(csv), 162u);
    ASSERT_TRUE(fs::exists(out + ".json"));

    const std::string replayed = (dir / "again").string();
    ASSERT_EQ(run_cli("replay " + out + ".json --out " + replayed + " --threads 1"), 0);
    EXPECT_EQ(read_file(replayed + ".csv"), csv);
}

TEST(Binary, DiffMapDefaultGridHas441Rows) {
    const fs::path dir = scratch_dir();
    const std::string out = (dir / "map").string();
    ASSERT_EQ(run_cli("diff-map --config " + kPreset + " --trials 2 --out " + out), 0);
    EXPECT_EQ(line_count(read_file(out + ".csv")), 442u);
}

TEST(Binary, ExitCodes) {
    const fs::path dir = scratch_dir();
    EXPECT_EQ(run_cli("--help"), 0);
    EXPECT_EQ(run_cli("spectrum"), 2);
    EXPECT_EQ(run_cli("spectrum --config " + kPreset + " --set zeta1_mhz=abc"), 2);
    EXPECT_EQ(run_cli("spectrum --config " + kPreset + " --nope"), 2);
    EXPECT_EQ(run_cli("spectrum --config " + (dir / "missing.cfg").string()), 1);
    const auto bad = write_config(dir, "od = 5\nl_mm = 0.001\n");
    EXPECT_EQ(run_cli("spectrum --config " + bad.string() + " --trials 2"), 1);
}
