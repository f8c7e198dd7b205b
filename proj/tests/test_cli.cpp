#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "lasernoise/device.hpp"
#include "lasernoise/steady_state.hpp"

using nlohmann::json;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the installed binary through the shell, capturing both streams.
CommandResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const auto err_path = std::filesystem::temp_directory_path() / "lasernoise_cli_stderr.txt";
    const std::string cmd =
        env_prefix + std::string(LASERNOISE_CLI_PATH) + " " + args + " 2>" + err_path.string();
    CommandResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buffer[4096];
    std::size_t got = 0;
    while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) {
        result.out.append(buffer, got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream err_file(err_path);
    std::stringstream err_stream;
    err_stream << err_file.rdbuf();
    result.err = err_stream.str();
    return result;
}

std::string format_full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

TEST_CASE("thresholds report the pinned reference values", "[cli]") {
    const CommandResult r = run_cli("thresholds --preset reference");
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.out);
    CHECK_THAT(out.at("j_th").get<double>(),
               Catch::Matchers::WithinRel(4.4443888888888877e17, 1e-12));
    CHECK_THAT(out.at("n_bar_th").get<double>(),
               Catch::Matchers::WithinRel(316.2277660168379, 1e-12));
    CHECK(out.at("n_T").get<double>() == 1.5);
    CHECK_THAT(out.at("beta_I_th_A").get<double>(), Catch::Matchers::WithinRel(7.1207e-7, 1e-4));
    CHECK_THAT(out.at("I_th_mA").get<double>(), Catch::Matchers::WithinRel(71.20696, 1e-6));
}

TEST_CASE("steady accepts the pump in either unit", "[cli]") {
    const lasernoise::DeviceParams p = lasernoise::reference_device();
    const double j = 2.0 * lasernoise::threshold_current(p);
    const CommandResult by_rate = run_cli("steady --preset reference --j " + format_full(j));
    REQUIRE(by_rate.exit_code == 0);
    const json out = json::parse(by_rate.out);
    CHECK_THAT(out.at("n_bar").get<double>(),
               Catch::Matchers::WithinRel(199997.49999999994, 1e-12));
    CHECK(out.contains("current_mA"));

    const double mA = j * lasernoise::elementary_charge * 1e3;
    const CommandResult by_mA =
        run_cli("steady --preset reference --current-mA " + format_full(mA));
    REQUIRE(by_mA.exit_code == 0);
    CHECK_THAT(json::parse(by_mA.out).at("n_bar").get<double>(),
               Catch::Matchers::WithinRel(199997.49999999994, 1e-9));
}

TEST_CASE("domain errors exit 1 with machine-readable JSON on stderr", "[cli]") {
    const CommandResult r = run_cli("noise --preset reference --j 0");
    CHECK(r.exit_code == 1);
    const json err = json::parse(r.err);
    CHECK(err.at("error") == "below_transparency");
    CHECK(err.contains("message"));
}

TEST_CASE("usage errors exit 2", "[cli]") {
    CHECK(run_cli("steady --no-such-flag 1 --preset reference").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);                      // missing subcommand
    CHECK(run_cli("thresholds --preset reference --format csv").exit_code == 2);
    CHECK(run_cli("steady --preset reference").exit_code == 2);  // pump missing
    CHECK(run_cli("steady --preset reference --preset toy-a --beta 0.1 --NT 500 "
                  "--tau-sp 1 --tau-cav 0.02 --j 100")
              .exit_code == 2);  // two device sources
    CHECK(run_cli("steady --beta 0.1 --j 100").exit_code == 2);  // incomplete inline device
}

TEST_CASE("help text is frozen", "[cli]") {
    const CommandResult r = run_cli("--help");
    CHECK(r.exit_code == 0);
    std::ifstream golden(std::string(LASERNOISE_GOLDEN_DIR) + "/help.txt");
    REQUIRE(golden.good());
    std::stringstream expected;
    expected << golden.rdbuf();
    CHECK(r.out == expected.str());
}

TEST_CASE("identical invocations are byte-identical", "[cli]") {
    const std::string args =
        "sweep light --preset reference --min 4e17 --max 9e17 --points 7 --format csv "
        "--no-metadata";
    const CommandResult a = run_cli(args);
    const CommandResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("j,n_bar,N_bar\n", 0) == 0);

    // JSON and CSV carry the same rows
    const CommandResult c = run_cli(
        "sweep light --preset reference --min 4e17 --max 9e17 --points 7 --no-metadata");
    REQUIRE(c.exit_code == 0);
    CHECK(json::parse(c.out).at("rows").size() == 7);
}

TEST_CASE("device files and the environment fallback", "[cli]") {
    const auto path = std::filesystem::temp_directory_path() / "lasernoise_cli_device.json";
    {
        std::ofstream out(path);
        out << R"({"beta": 1e-5, "N_T": 1e9, "tau_sp_s": 3e-9, "tau_cav_s": 4.5e-13})";
    }
    const CommandResult by_flag = run_cli("thresholds --device " + path.string());
    const CommandResult by_preset = run_cli("thresholds --preset reference");
    REQUIRE(by_flag.exit_code == 0);
    CHECK(by_flag.out == by_preset.out);

    const CommandResult by_env =
        run_cli("thresholds", "LASERNOISE_DEVICE=" + path.string() + " ");
    REQUIRE(by_env.exit_code == 0);
    CHECK(by_env.out == by_preset.out);
    std::filesystem::remove(path);

    CHECK(run_cli("thresholds --device /nonexistent/nowhere.json").exit_code == 1);
}

TEST_CASE("reports can be written to a file", "[cli]") {
    const auto path = std::filesystem::temp_directory_path() / "lasernoise_cli_out.json";
    const CommandResult r =
        run_cli("thresholds --preset toy-a --output " + path.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    json out;
    in >> out;
    CHECK_THAT(out.at("j_th").get<double>(), Catch::Matchers::WithinRel(650.0, 1e-12));
    std::filesystem::remove(path);
}

TEST_CASE("unknown sweep columns are a domain error", "[cli]") {
    const CommandResult r = run_cli(
        "sweep light --preset reference --min 4e17 --max 9e17 --points 3 --columns wavelength");
    CHECK(r.exit_code == 1);
    CHECK(json::parse(r.err).at("error") == "invalid_parameter");
}

TEST_CASE("quick verification of a toy preset passes", "[cli]") {
    const CommandResult r = run_cli("verify --preset toy-a --seed 7");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("result: 2/2 passed") != std::string::npos);
}
