// test_cli.cpp — In-process runs of the command-line driver

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "fdd/cli.hpp"
#include "fdd/floquet.hpp"
#include "fdd/io.hpp"

using namespace fdd;
using fdd::io::Json;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path dir;
    explicit Sandbox(const std::string& name) : dir(fs::temp_directory_path() / ("fdd_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }

    fs::path scenario(const Json& doc, const std::string& name = "scenario.json") const {
        io::write_text(dir / name, doc.dump(2));
        return dir / name;
    }
};

Json rydberg() {
    return Json::parse(R"({
        "drive": {"frequency_convention": "angular", "omega": 1e10, "rabi": 1e8, "detuning": 0},
        "geometry": {"separation": 4e-5, "dipole_ea0": 1000, "theta_d": 1.5707963267948966},
        "bath": {"temperature": 0}
    })");
}

int run(const std::string& sub, const fs::path& scenario, const fs::path& out, std::string* err = nullptr) {
    cli::RunOptions o;
    o.subcommand = sub;
    o.scenario = scenario;
    o.out = out;
    std::ostringstream e;
    const int code = cli::run(o, e);
    if (err) *err = e.str();
    return code;
}

} // namespace

TEST_CASE("unknown scenario key is named and exits 1") {
    Sandbox box("unknown");
    Json doc = rydberg();
    doc["drive"]["rabbi"] = 1.0;
    std::string err;
    CHECK(run("floquet", box.scenario(doc), box.dir / "out", &err) == cli::invalid_scenario);
    CHECK(err.find("rabbi") != std::string::npos);
}

TEST_CASE("transition frequency: exactly one of omega_eg and detuning") {
    Sandbox box("exclusive");
    Json both = rydberg();
    both["drive"]["omega_eg"] = 1e10;
    CHECK(run("floquet", box.scenario(both), box.dir / "a") == cli::invalid_scenario);
    Json neither = rydberg();
    neither["drive"].erase("detuning");
    CHECK(run("floquet", box.scenario(neither), box.dir / "b") == cli::invalid_scenario);
    Json no_convention = rydberg();
    no_convention["drive"].erase("frequency_convention");
    CHECK(run("floquet", box.scenario(no_convention), box.dir / "c") == cli::invalid_scenario);
}

TEST_CASE("undriven floquet run returns the folded bare energies") {
    Sandbox box("undriven");
    const Json doc = Json::parse(
        R"({"drive": {"frequency_convention": "angular", "omega": 1.0, "rabi": 0.0, "omega_eg": 0.7}})");
    REQUIRE(run("floquet", box.scenario(doc), box.dir) == cli::success);
    const auto t = io::read_csv(box.dir / "quasienergies.csv", {"branch"});
    REQUIRE(t.rows.size() == 2);
    const double e = floquet::fold_to_zone(0.35, 1.0);
    CHECK(std::abs(std::abs(t.rows[0][1]) - std::abs(e)) <= 1e-12);
    CHECK(std::abs(t.rows[0][1] + t.rows[1][1]) <= 1e-12);
    CHECK(fs::exists(box.dir / "floquet.json"));
    CHECK(fs::exists(box.dir / "sidebands.csv"));
}

TEST_CASE("spinmodel at resonance has J_xx = 2 J_yy = 2 J_zz") {
    Sandbox box("spin");
    REQUIRE(run("spinmodel", box.scenario(rydberg()), box.dir) == cli::success);
    const auto t = io::read_csv(box.dir / "j_tensor.csv");
    REQUIRE(t.rows.size() == 1);
    CHECK(std::abs(t.rows[0][2] / t.rows[0][3] - 2.0) <= 1e-10);
    CHECK(std::abs(t.rows[0][2] / t.rows[0][4] - 2.0) <= 1e-10);
    CHECK(t.rows[0][5] == 0.0);
    const Json bundle = Json::parse(io::read_text(box.dir / "spinmodel.json"));
    CHECK(bundle["timescales"]["hierarchy_ok"] == true);
    CHECK_FALSE(bundle.contains("timing"));
}

TEST_CASE("identical inputs give byte-identical outputs") {
    Sandbox box("determinism");
    const auto sc = box.scenario(rydberg());
    for (const std::string sub : {"coefficients", "channels", "spinmodel"}) {
        REQUIRE(run(sub, sc, box.dir / "a") == cli::success);
        REQUIRE(run(sub, sc, box.dir / "b") == cli::success);
        for (const auto& entry : fs::directory_iterator(box.dir / "a")) {
            const auto name = entry.path().filename();
            CHECK(io::read_text(box.dir / "a" / name) == io::read_text(box.dir / "b" / name));
        }
    }
}

TEST_CASE("exit codes for I/O and physics failures") {
    Sandbox box("codes");
    const auto sc = box.scenario(rydberg());
    io::write_text(box.dir / "blocker", "x");
    CHECK(run("floquet", sc, box.dir / "blocker", nullptr) == cli::io_error);
    CHECK(run("floquet", box.dir / "missing.json", box.dir / "o") == cli::io_error);

    const Json degenerate = Json::parse(
        R"({"drive": {"frequency_convention": "angular", "omega": 1.0, "rabi": 0.0, "omega_eg": 1.0}})");
    std::string err;
    CHECK(run("floquet", box.scenario(degenerate, "deg.json"), box.dir / "d", &err) == cli::physics_error);
    CHECK_FALSE(err.empty());

    cli::RunOptions bad;
    bad.subcommand = "nonsense";
    std::ostringstream e;
    CHECK(cli::run(bad, e) == cli::invalid_scenario);
}
