#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "billiard/experiments.hpp"

using namespace billiard;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "billiard");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// JSON output parsed back into records.
json cli_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    const auto r = cli(args);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    return json::parse(r.out);
}

const std::string kThird = "1.0471975511965976";

}  // namespace

TEST_CASE("orbit examples") {
    const auto diam = cli_json({"orbit", "--domain", "circle", "--s0", "0", "--theta0", "1.5707963267948966",
                                "--steps", "4"});
    const auto& rows = diam["rows"];
    REQUIRE(rows.size() == 5);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double s = rows[k]["s"].get<double>();
        const double expected = k % 2 ? kPi : 0.0;
        CHECK(std::min(std::abs(s - expected), std::abs(s - expected - 2 * kPi)) < 1e-12);
    }
    CHECK(rows[4]["status"] == "end");

    const auto third = cli_json({"orbit", "--domain", "circle", "--s0", "0", "--theta0", kThird, "--steps", "3"});
    CHECK(std::abs(third["rows"][0]["s"].get<double>()) < 1e-12);
    CHECK(std::abs(third["rows"][1]["s"].get<double>() - 2 * kPi / 3) < 1e-12);
    CHECK(std::abs(third["rows"][2]["s"].get<double>() - 4 * kPi / 3) < 1e-12);
    CHECK(std::abs(third["rows"][1]["chord_length"].get<double>() - std::sqrt(3.0)) < 1e-12);

    // From (0, 0.5) on the left edge of the unit square straight at (1, 0).
    const auto r = cli({"orbit", "--domain", "polygon", "--s0", "3.5", "--theta0", "1.1071487177940904", "--steps",
                        "5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("corner_hit") != std::string::npos);
    CHECK(r.out.find("# steps_completed=0") != std::string::npos);
}

TEST_CASE("orbit requires an initial point") {
    const auto r = cli({"orbit", "--domain", "circle"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("initial phase point") != std::string::npos);
}

TEST_CASE("rotnum examples") {
    const auto doc = cli_json({"rotnum", "--domain", "circle", "--samples", "100", "--steps", "100"});
    REQUIRE(doc["rows"].size() == 100);
    for (const auto& row : doc["rows"])
        CHECK(std::abs(row["rho_N"].get<double>() - row["theta0"].get<double>() / kPi) < 1e-9);
    for (std::size_t i = 0; i < 100; ++i) CHECK(doc["rows"][i]["sample_id"] == i);

    const auto st = cli_json({"rotnum", "--domain", "stadium", "--samples", "50", "--steps", "100000", "--seed",
                              "2024"});
    for (const auto& row : st["rows"]) {
        CHECK(row["singular_flag"] == 0);
        CHECK(row["rho_N"].get<double>() >= 0.45);
        CHECK(row["rho_N"].get<double>() <= 0.55);
    }

    const auto one = cli_json({"rotnum", "--domain", "ellipse", "--s0", "1", "--theta0", "1", "--steps", "10"});
    CHECK(one["rows"].size() == 1);
    CHECK(one["metadata"]["samples"] == 1);
}

TEST_CASE("rotvec examples") {
    const auto never = cli_json({"rotvec", "--domain", "concentric_annulus", "--s0", "0", "--theta0",
                                 "0.78539816339744828", "--steps", "1000"});
    const auto& row = never["rows"][0];
    CHECK(std::abs(row["rho_0"].get<double>() - 0.25) < 1e-12);
    CHECK(row["rho_1"].get<double>() == 0.0);
    CHECK(row["visits_1"] == 0);
    CHECK(std::abs(row["rho_total"].get<double>() - 0.25) < 1e-12);

    const auto simple = cli_json({"rotvec", "--domain", "stadium", "--s0", "0.3", "--theta0", "1.2", "--steps",
                                  "1000"});
    const auto num = cli_json({"rotnum", "--domain", "stadium", "--s0", "0.3", "--theta0", "1.2", "--steps",
                               "1000"});
    CHECK(simple["rows"][0]["rho_0"] == num["rows"][0]["rho_N"]);
    CHECK(simple["columns"].size() == 4 + 3 + 4);
}

TEST_CASE("mean-check examples") {
    const auto r = cli({"mean-check", "--domain", "circle", "--samples", "2000", "--steps", "2000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("# verdict=PASS") != std::string::npos);

    const auto annulus = cli_json({"mean-check", "--domain", "concentric_annulus", "--samples", "400", "--steps",
                                   "500"});
    const auto& rows = annulus["rows"];
    REQUIRE(rows.size() == 3);
    CHECK(std::abs(rows[0]["target"].get<double>() - 1.0 / 3.0) < 1e-15);
    CHECK(std::abs(rows[1]["target"].get<double>() - 1.0 / 6.0) < 1e-15);
    CHECK(rows[2]["quantity"] == "rho_total");

    const auto asym = cli_json({"mean-check", "--domain", "asymmetric_annulus", "--samples", "10", "--steps", "10"});
    CHECK(std::abs(asym["rows"][0]["target"].get<double>() - 5.0 / 13.0) < 1e-15);
    CHECK(std::abs(asym["rows"][1]["target"].get<double>() - 1.5 / 13.0) < 1e-15);

    CHECK(cli({"mean-check", "--domain", "circle", "--samples", "1"}).code == kExitUsage);
}

TEST_CASE("symmetry-check examples") {
    const auto doc = cli_json({"symmetry-check", "--domain", "circle", "--samples", "5000", "--steps", "1"});
    CHECK(doc["summary"]["verdict"] == "PASS");
    CHECK(doc["rows"].size() == 20);
    long total = 0;
    for (const auto& row : doc["rows"]) total += row["count"].get<long>();
    CHECK(total == 5000);

    const auto r = cli({"symmetry-check", "--domain", "circle", "--samples", "1"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("insufficient samples") != std::string::npos);
}

TEST_CASE("involution-check examples") {
    const auto r = cli({"involution-check", "--domain", "circle", "--samples", "100", "--steps", "10000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    for (const char* table : {"ellipse", "stadium", "polygon", "asymmetric_annulus"}) {
        const auto t = cli({"involution-check", "--domain", table, "--samples", "20", "--steps", "2000"});
        CHECK_MESSAGE(t.code == 0, table);
    }
    CHECK(cli({"involution-check", "--domain", "circle", "--samples", "0"}).code == kExitUsage);
}

TEST_CASE("output is deterministic and carries metadata") {
    const std::vector<std::string> args = {"rotnum", "--domain", "ellipse", "--samples", "30", "--steps", "300",
                                           "--seed", "17"};
    const auto a = cli(args);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    const auto b = cli(threaded);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("# tool=billiard version=", 0) == 0);
    CHECK(a.out.find("seed=17 steps=300 samples=30") != std::string::npos);
    CHECK(a.out.find("\nsample_id,component,s0,theta0,rho_N,half_width,steps_completed,singular_flag\n") !=
          std::string::npos);
}

TEST_CASE("config files and the out option") {
    const std::string cfg_path = "billiard_cli_test.json";
    const std::string out_path = "billiard_cli_test_out.csv";
    {
        std::ofstream f(cfg_path);
        f << R"({"domain": {"components": [{"type": "circle", "r": 2}]},
                 "initial": {"s": 0, "theta": 1.0471975511965976}, "steps": 6})";
    }
    const auto r = cli({"orbit", "--config", cfg_path, "--out", out_path});
    CHECK(r.code == 0);
    CHECK(r.out.find("steps_completed=6") != std::string::npos);
    std::ifstream in(out_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("k,component,s,theta,x,y,chord_length,status") != std::string::npos);
    // Chord on a circle of radius 2 at pi/3: 2 R sin(theta).
    CHECK(text.find(",3.46410161513775") != std::string::npos);
    std::remove(cfg_path.c_str());
    std::remove(out_path.c_str());
}

TEST_CASE("usage errors") {
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
    CHECK(cli({"rotnum"}).code == kExitUsage);
    CHECK(cli({"rotnum", "--domain", "torus"}).code == kExitUsage);
    CHECK(cli({"rotnum", "--domain", "circle", "--s0", "1"}).code == kExitUsage);
    CHECK(cli({"rotnum", "--domain", "circle", "--steps", "0"}).code == kExitUsage);
    CHECK(cli({"rotnum", "--domain", "circle", "--format", "xml"}).code == kExitUsage);
    CHECK(cli({"rotnum", "--config", "/nonexistent.json"}).code == kExitUsage);
    CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("format_real") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(std::nan("")) == "nan");
    CHECK(format_real(-INFINITY) == "-inf");
}
