#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "gwphase/runner.hpp"

namespace fs = std::filesystem;
using namespace gwphase;
using nlohmann::json;

namespace {

fs::path scratch() {
    static const fs::path dir = [] {
        std::random_device rd;
        const fs::path p = fs::temp_directory_path() / ("gwphase_test_" + std::to_string(rd()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const std::string& name, const json& doc) {
    const fs::path p = scratch() / (name + ".json");
    std::ofstream(p) << doc.dump(2);
    return p;
}

// Exit status of `gwphase <args>` with stdout and stderr sent to files.
int gwphase_cli(const std::string& args, const std::string& tag = "last") {
    const std::string cmd = std::string("\"") + GWPHASE_CLI + "\" " + args + " > \"" +
                            (scratch() / (tag + ".out")).string() + "\" 2> \"" +
                            (scratch() / (tag + ".err")).string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_path(const std::string& name) {
    return std::string(GWPHASE_CONFIGS) + "/" + name;
}

std::vector<cli::RunRecord> run_config(const std::string& name) {
    return cli::run(cli::load_config(config_path(name)));
}

}  // namespace

TEST_CASE("shipped configs validate and run") {
    for (const char* name : {"cone.json", "stokes.json", "adiabatic.json", "jones.json", "jones_null.json",
                             "helix.json", "ac.json", "bo.json"}) {
        CAPTURE(name);
        CHECK(gwphase_cli("validate --config \"" + config_path(name) + "\"") == 0);
    }
    CHECK(gwphase_cli("list-scenarios", "list") == 0);
    const std::string listing = read_file(scratch() / "list.out");
    for (const char* s : {"cone", "jones", "helix", "ac", "bo", "stokes", "adiabatic"})
        CHECK(listing.find(std::string(s) + "\t") != std::string::npos);
}

TEST_CASE("exit codes") {
    const auto good = write_config("good", {{"scenario", "cone"}, {"params", {{"theta", 0.7}}}});
    CHECK(gwphase_cli("run --config \"" + good.string() + "\"") == 0);

    const auto unknown = write_config("unknown", {{"scenario", "cone"}, {"params", {{"thetta", 0.7}}}});
    CHECK(gwphase_cli("run --config \"" + unknown.string() + "\"") == 2);
    const auto bad_scenario = write_config("bad_scenario", {{"scenario", "pendulum"}});
    CHECK(gwphase_cli("run --config \"" + bad_scenario.string() + "\"") == 2);
    const auto zero_res = write_config("zero_res", {{"scenario", "cone"}, {"resolution", {{"samples", 0}}}});
    CHECK(gwphase_cli("validate --config \"" + zero_res.string() + "\"") == 2);
    CHECK(gwphase_cli("run") == 2);
    {
        std::ofstream(scratch() / "broken.json") << "{ \"scenario\": ";
        CHECK(gwphase_cli("run --config \"" + (scratch() / "broken.json").string() + "\"") == 2);
    }

    // Overlap 1 / cosh(30) is far below the exceptional-point floor.
    const auto ep = write_config("ep", {{"scenario", "cone"}, {"params", {{"theta", {0.5, 30.0}}}}});
    CHECK(gwphase_cli("run --config \"" + ep.string() + "\"", "ep") == 3);
    const json diag = json::parse(read_file(scratch() / "ep.err"));
    CHECK(diag.at("kind") == "exceptional_point");
    CHECK(diag.contains("overlap"));

    CHECK(gwphase_cli("run --config \"" + (scratch() / "missing.json").string() + "\"") == 4);
    const auto unwritable = scratch() / "no/such/dir/x.csv";
    CHECK(gwphase_cli("run --config \"" + good.string() + "\" --out \"" + unwritable.string() + "\"") == 4);
}

TEST_CASE("identical configs give byte-identical output") {
    const auto a = scratch() / "a.csv", b = scratch() / "b.csv";
    const std::string cfg = config_path("adiabatic.json");
    REQUIRE(gwphase_cli("run --config \"" + cfg + "\" --out \"" + a.string() + "\"") == 0);
    REQUIRE(gwphase_cli("run --config \"" + cfg + "\" --out \"" + b.string() + "\"") == 0);
    const std::string first = read_file(a);
    CHECK(!first.empty());
    CHECK(first == read_file(b));
    CHECK(first.back() == '\n');
}

TEST_CASE("thread budget does not change the output") {
    const std::string cfg = config_path("stokes.json");
    REQUIRE(gwphase_cli("run --config \"" + cfg + "\" --format json", "one") == 0);
    REQUIRE(std::system(("GWPHASE_THREADS=3 \"" + std::string(GWPHASE_CLI) + "\" run --config \"" + cfg +
                         "\" --format json > \"" + (scratch() / "three.out").string() + "\"")
                            .c_str()) == 0);
    CHECK(read_file(scratch() / "one.out") == read_file(scratch() / "three.out"));
}

TEST_CASE("JSON round trip") {
    const auto records = run_config("cone.json");
    const json parsed = json::parse(cli::render(records, "json"));
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(parsed[i].size() == records[i].size());
        for (const auto& [key, value] : records[i].items())
            CHECK(parsed[i].at(key) == json(value));
    }
}

TEST_CASE("CSV layout") {
    cli::RunRecord r;
    r["scenario"] = "cone";
    r["phi_re"] = 0.1;
    r["phi_im"] = -1.0 / 3.0;
    const std::string text = cli::render({r}, "csv");
    CHECK(text == "scenario,phi_re,phi_im\ncone,0.10000000000000001,-0.33333333333333331\n");
    // 17 significant digits round-trip exactly.
    CHECK(std::stod("-0.33333333333333331") == -1.0 / 3.0);
    CHECK_THROWS_AS(cli::render({}, "csv"), ContractViolation);
    CHECK_THROWS_AS(cli::render({}, "json"), ContractViolation);
}

TEST_CASE("config parsing") {
    CHECK_THROWS_AS(cli::parse_config({{"scenario", "cone"}, {"extra", 1}}), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config({{"scenario", "cone"}, {"resolution", {{"grid", -4}}}}), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config({{"scenario", "cone"}, {"output", {{"format", "xml"}}}}), cli::ConfigError);
    const auto c = cli::parse_config({{"scenario", "bo"}, {"resolution", {{"grid", 64}}}, {"output", {{"format", "json"}}}});
    CHECK(c.scenario == "bo");
    CHECK(c.resolution.grid == 64);
    CHECK(c.format == "json");
    CHECK_FALSE(c.timing);
}

TEST_CASE("scenario records") {
    SUBCASE("real cone angle gives a real phase") {
        cli::RunConfig c;
        c.scenario = "cone";
        c.params = {{"theta", 1.0}};
        for (const auto& r : cli::run(c))
            CHECK(std::abs(r.at("phi_im").get<double>()) < 1e-8);
    }
    SUBCASE("null optics sequence") {
        const auto records = run_config("jones_null.json");
        REQUIRE(records.size() == 1);
        CHECK(std::hypot(records[0].at("phi_re").get<double>(), records[0].at("phi_im").get<double>()) < 1e-10);
    }
    SUBCASE("adiabatic errors decrease") {
        const auto records = run_config("adiabatic.json");
        REQUIRE(records.size() == 3);
        CHECK(records[0].at("error").get<double>() > records[1].at("error").get<double>());
        CHECK(records[1].at("error").get<double>() > records[2].at("error").get<double>());
    }
}
