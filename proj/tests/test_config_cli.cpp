#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hybrid/cli.hpp"
#include "hybrid/config_io.hpp"
#include "hybrid/eigen_analysis.hpp"
#include "hybrid/errors.hpp"
#include "hybrid/spectra.hpp"
#include "support.hpp"

using namespace hybrid;

namespace {

const char* kMinimal = R"({"modes": [{"name": "P1", "frequency": {"type": "static", "value_ghz": 3.4},
                                      "alpha_ghz": 0.002, "beta_ghz": 0.018}]})";

std::string schema_path(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const SchemaError& e) {
        return e.path();
    }
    return "<no error>";
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "hybridmodes-tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<std::string> bundled_presets() {
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(preset_directory())) {
        if (entry.path().extension() == ".json") names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

}  // namespace

TEST_CASE("minimal document gets explicit defaults") {
    const SystemConfig c = parse_config(kMinimal);
    REQUIRE(c.size() == 1);
    CHECK(c.couplings.empty());
    CHECK(c.field_sweep.points == 301);
    CHECK(c.frequency_sweep.points == 401);
    CHECK(std::get<StaticFrequency>(c.modes[0].frequency).value_ghz == 3.4);
}

TEST_CASE("bundled three-mode preset") {
    const SystemConfig c = testing::preset("three_mode_table1_row_df.json");
    REQUIRE(c.size() == 3);
    CHECK(c.find_coupling("M", "P1")->gamma == 0.1);
    CHECK(c.find_coupling("P2", "M")->gamma == 0.1);
    const CouplingSpec* p = c.find_coupling("P1", "P2");
    CHECK((p == nullptr || (p->gamma == 0.0 && p->j == 0.0)));
    CHECK(c.field_sweep == Sweep{0.0, 3.0, 301});
}

TEST_CASE("unknown mode in coupling is named") {
    const std::string doc = R"({"modes": [{"name": "P1", "frequency": {"type": "static", "value_ghz": 3.4},
        "alpha_ghz": 0, "beta_ghz": 0.01}], "couplings": [{"a": "P1", "b": "P9", "gamma_ghz": 0.1}]})";
    try {
        (void)parse_config(doc);
        FAIL("expected UnknownModeInCoupling");
    } catch (const UnknownModeInCoupling& e) {
        CHECK(e.name() == "P9");
    }
}

TEST_CASE("duplicate mode is named") {
    const std::string doc = R"({"modes": [
        {"name": "P1", "frequency": {"type": "static", "value_ghz": 3.4}, "alpha_ghz": 0, "beta_ghz": 0.01},
        {"name": "P1", "frequency": {"type": "static", "value_ghz": 4.1}, "alpha_ghz": 0, "beta_ghz": 0.01}]})";
    try {
        (void)parse_config(doc);
        FAIL("expected DuplicateMode");
    } catch (const DuplicateMode& e) {
        CHECK(e.name() == "P1");
    }
}

TEST_CASE("schema errors carry a JSON pointer") {
    CHECK(schema_path("[1, 2]") == "/");
    CHECK(schema_path("{\"modes\": [") == "/");
    CHECK(schema_path("{}") == "/modes");
    CHECK(schema_path(R"({"modes": [], "extra": 1})") == "/extra");
    CHECK(schema_path(R"({"modes": []})") == "/modes");
    CHECK(schema_path(R"({"modes": [{"name": "P", "frequency": {"type": "static", "value_ghz": 3.4},
        "alpha_ghz": "big", "beta_ghz": 0}]})") == "/modes/0/alpha_ghz");
    CHECK(schema_path(R"({"modes": [{"name": "P", "frequency": {"type": "static", "value_ghz": 3.4, "unit": "GHz"},
        "alpha_ghz": 0, "beta_ghz": 0}]})") == "/modes/0/frequency/unit");
    CHECK(schema_path(R"({"modes": [{"name": "P", "frequency": {"type": "cubic"},
        "alpha_ghz": 0, "beta_ghz": 0}]})") == "/modes/0/frequency/type");
    CHECK(schema_path(R"({"modes": [{"name": "P", "frequency": {"type": "static", "value_ghz": 3.4},
        "alpha_ghz": -1, "beta_ghz": 0}]})") == "/modes/0/alpha_ghz");
    CHECK(schema_path(std::string(kMinimal).insert(std::string(kMinimal).size() - 1,
        R"(, "field_sweep": {"start_koe": 0, "stop_koe": 3, "points": 1})")) == "/field_sweep/points");
    CHECK(schema_path(std::string(kMinimal).insert(std::string(kMinimal).size() - 1,
        R"(, "couplings": [{"a": "P1", "b": "P1", "gamma": 0.1}])")) == "/couplings/0/gamma");
}

TEST_CASE("serialize/parse round trip on every bundled preset") {
    const auto names = bundled_presets();
    REQUIRE(names.size() >= 8);
    for (const auto& name : names) {
        CAPTURE(name);
        const SystemConfig c = testing::preset(name);
        CHECK(parse_config(serialize_config(c)) == c);
        CHECK(serialize_config(parse_config(serialize_config(c))) == serialize_config(c));
    }
}

TEST_CASE("every bundled preset runs end to end") {
    for (const auto& name : bundled_presets()) {
        CAPTURE(name);
        const SystemConfig c = testing::preset(name);
        const SpectrumGrid g = sweep_spectrum(c);
        CHECK(g.s21.allFinite());
        const BranchSet bs = eigen_sweep(c);
        for (const auto& zone : crossing_zones(c)) CHECK(classify_zone(bs, zone).real_class.has_value());
    }
}

TEST_CASE("config paths resolve directly or through the preset directory") {
    CHECK(resolve_config_path("magnon_only.json") == preset_directory() / "magnon_only.json");
    CHECK_THROWS_AS(resolve_config_path("no_such_preset.json"), IoError);
}

TEST_CASE("cli: classify") {
    const Run r = cli({"classify", "--config", "three_mode_table1_row_mo.json"});
    CHECK(r.code == 0);
    CHECK(r.out.find("M-P2: real=Repulsion imag=Attraction\n") != std::string::npos);
    CHECK(r.out.find("M-P1: real=Attraction imag=Repulsion\n") != std::string::npos);

    const Run only = cli({"classify", "--config", "three_mode_table1_row_mo.json", "--zone", "M-P2"});
    CHECK(only.out == "M-P2: real=Repulsion imag=Attraction\n");
}

TEST_CASE("cli: reproduce") {
    for (const char* table : {"table1", "table2"}) {
        const Run r = cli({"reproduce", table});
        CHECK(r.code == 0);
        CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
        CHECK(r.out.find("FAIL") == std::string::npos);
        std::istringstream lines(r.out);
        for (std::string line; std::getline(lines, line);) CHECK(line.rfind("PASS ", 0) == 0);
    }
    CHECK(cli({"reproduce", "table3"}).code == 2);
}

TEST_CASE("cli: reproduce reports a mismatching row") {
    const auto dir = scratch_dir() / "presets";
    std::filesystem::create_directories(dir);
    for (const auto& name : bundled_presets()) {
        std::filesystem::copy_file(preset_directory() / name, dir / name, std::filesystem::copy_options::overwrite_existing);
    }
    SystemConfig swapped = testing::preset("three_mode_table1_row_mo.json");
    swapped.coupling("M", "P2").gamma = 0.1;
    swapped.coupling("P1", "P2").gamma = 0.0;
    std::ofstream(dir / "three_mode_table1_row_mo.json") << serialize_config(swapped);

    const std::string saved = preset_directory().string();
    ::setenv("HYBRID_PRESET_DIR", dir.c_str(), 1);
    const Run r = cli({"reproduce", "table1"});
    ::setenv("HYBRID_PRESET_DIR", saved.c_str(), 1);

    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL table1 row m-o") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 2") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"classify"}).code == 2);
    CHECK(cli({"classify", "--config", "no_such_file.json"}).code == 2);
    CHECK(cli({"spectrum", "--config", "magnon_only.json", "--pgm", "0,-10", "--out", "x.csv"}).code == 2);
    CHECK(cli({"spectrum", "--config", "magnon_only.json", "--pgm", "-10,0"}).code == 2);
    CHECK(cli({"spectrum", "--config", "magnon_only.json", "--threads", "0"}).code == 2);
    CHECK(cli({"map", "--config", "three_mode_table1_row_df.json", "--zone", "M-P2", "--axis1", "M-P2:gamma",
               "--axis2", "P1-P2:gamma=0:0.2:3"}).code == 2);

    const auto bad = scratch_dir() / "bad.json";
    std::ofstream(bad) << R"({"modes": [], "colour": "blue"})";
    const Run r = cli({"eigen", "--config", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("/colour") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("cli: help exits 0") {
    const Run r = cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("reproduce") != std::string::npos);
}

TEST_CASE("cli: spectrum files") {
    const auto dir = scratch_dir();
    const auto csv = dir / "photon.csv";
    const auto pgm = dir / "photon.pgm";
    std::filesystem::remove(csv);
    std::filesystem::remove(pgm);
    const Run r = cli({"spectrum", "--config", "photon_only.json", "--out", csv.string(), "--pgm", "-40,0", "--quiet"});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    REQUIRE(std::filesystem::exists(csv));
    REQUIRE(std::filesystem::exists(pgm));
    std::ifstream in(pgm, std::ios::binary);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    CHECK(magic == "P5");
    CHECK(w == 401);
    CHECK(h == 301);
    CHECK(maxval == 255);
    CHECK(std::filesystem::file_size(pgm) == std::string("P5\n401 301\n255\n").size() + 401u * 301u);

    std::ifstream text(csv);
    const SpectrumGrid back = parse_spectrum_csv(text);
    CHECK(back.field_values.size() == 301);
    CHECK(back.freq_values.size() == 401);
}

TEST_CASE("cli: eigen and stdout output") {
    const Run r = cli({"eigen", "--config", "three_mode_uncoupled.json"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("h_koe,branch,re_ghz,im_ghz\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1 + 301 * 3);
}

TEST_CASE("cli: boundary") {
    const Run r = cli({"boundary", "--config", "three_mode_table1_row_mo.json", "--param", "P1-P2:gamma", "--lo", "0",
                       "--hi", "0.2", "--zone", "M-P2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("critical=0.0964355469") != std::string::npos);
    CHECK(r.out.find("tolerance=0.0001") != std::string::npos);

    const Run none = cli({"boundary", "--config", "three_mode_table1_row_mo.json", "--param", "P1-P2:gamma", "--lo",
                          "0.15", "--hi", "0.2", "--zone", "M-P2"});
    CHECK(none.code == 1);
    CHECK(none.err.find("does not cross") != std::string::npos);
}

TEST_CASE("cli: map") {
    const Run r = cli({"map", "--config", "three_mode_table1_row_df.json", "--zone", "M-P2", "--axis1",
                       "M-P2:gamma=0.02:0.02:1", "--axis2", "P1-P2:gamma=0.2:0.2:1"});
    CHECK(r.code == 0);
    CHECK(r.out == "v1,v2,real_class,imag_class\n0.0200000000,0.200000000,Repulsion,Attraction\n");
}
