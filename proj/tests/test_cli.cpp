// SPDX-License-Identifier: Apache-2.0
//
// idschan: mmWave channel toolkit for indoor dense spaces
// Copyright (C) 2026 The idschan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include <doctest.h>

#include "idschan/cli.hpp"
#include "idschan/errors.hpp"
#include "idschan/pathdata.hpp"
#include "idschan/scene_config.hpp"
#include "support.hpp"

using namespace idschan;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string row_of(const std::string& csv, const std::string& key) {
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);)
        if (line.rfind(key + ",", 0) == 0) return line;
    return {};
}

} // namespace

TEST_CASE("presets dump carries the table verbatim") {
    const auto r = run({"presets"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("parameter,BL/LOS,BL/NLOS,CV/LOS", 0) == 0);
    CHECK(row_of(r.out, "A_db").rfind("A_db,58.49,59,", 0) == 0);
    CHECK(row_of(r.out, "B").rfind("B,1.45,3.62,", 0) == 0);
    CHECK(row_of(r.out, "sigma_sf_db").rfind("sigma_sf_db,5.58,7.76,", 0) == 0);
    CHECK(row_of(r.out, "mu_kf_db").rfind("mu_kf_db,-4.51,n/a,", 0) == 0);
}

TEST_CASE("trace then extract yields both condition blocks") {
    support::TempDir dir;
    const auto ds = (dir / "emv.csv").string();
    REQUIRE(run({"trace", "--preset", "EmV", "--out", ds}).code == 0);
    REQUIRE(run({"extract", "--in", ds, "--out", (dir / "emv").string()}).code == 0);
    const auto params = support::slurp(dir / "emv.params.csv");
    CHECK(params.rfind("parameter,EmV/LOS,EmV/NLOS\n", 0) == 0);
    const auto a = row_of(params, "A_db");
    CHECK(a.find("n/a") == std::string::npos);
    CHECK(row_of(params, "mu_kf_db").find("n/a") != std::string::npos);
    CHECK(support::slurp(dir / "emv.ratios.csv").rfind("scenario,LOS,NLOS,DS,Outage,n_records\nEmV,", 0) == 0);
    CHECK(support::slurp(dir / "emv.residuals.csv").rfind("rx_id,condition,distance_3d_m", 0) == 0);
}

TEST_CASE("subcommands are byte-reproducible across thread counts") {
    support::TempDir dir;
    const auto p = [&](const std::string& n) { return (dir / n).string(); };
    for (const char* threads : {"1", "3"}) {
        const std::string t = threads;
        REQUIRE(run({"trace", "--preset", "BL", "--threads", t, "--out", p("bl" + t + ".csv")}).code == 0);
        REQUIRE(run({"extract", "--in", p("bl1.csv"), "--threads", t, "--out", p("x" + t)}).code == 0);
        REQUIRE(run({"rssi", "--in", p("bl1.csv"), "--out", p("rssi" + t + ".csv")}).code == 0);
        REQUIRE(run({"gen", "--preset", "BL", "--cond", "LOS", "--seed", "5", "--set", "n=300", "--threads", t,
                     "--out", p("gen" + t + ".csv")})
                    .code == 0);
        REQUIRE(run({"ber", "--presets", "BL,3GPP-InO", "--cond", "LOS", "--ebn0", "0:5:20", "--bits", "20000",
                     "--threads", t, "--seed", "3", "--out", p("ber" + t + ".csv")})
                    .code == 0);
    }
    for (const char* f : {"bl%.csv", "bl%.meta.json", "x%.params.csv", "x%.ratios.csv", "x%.residuals.csv",
                          "rssi%.csv", "gen%.csv", "gen%.meta.json", "ber%.csv"}) {
        std::string one = f, three = f;
        one.replace(one.find('%'), 1, "1");
        three.replace(three.find('%'), 1, "3");
        CAPTURE(one);
        CHECK(support::slurp(dir / one) == support::slurp(dir / three));
        CHECK(!support::slurp(dir / one).empty());
    }
}

TEST_CASE("seed environment fallback") {
    support::TempDir dir;
    const auto p = [&](const std::string& n) { return (dir / n).string(); };
    ::setenv(cli::kSeedEnv, "77", 1);
    REQUIRE(run({"gen", "--preset", "CV", "--set", "n=20", "--out", p("env.csv")}).code == 0);
    ::unsetenv(cli::kSeedEnv);
    REQUIRE(run({"gen", "--preset", "CV", "--set", "n=20", "--seed", "77", "--out", p("flag.csv")}).code == 0);
    REQUIRE(run({"gen", "--preset", "CV", "--set", "n=20", "--out", p("default.csv")}).code == 0);
    CHECK(support::slurp(dir / "env.csv") == support::slurp(dir / "flag.csv"));
    CHECK(support::slurp(dir / "env.csv") != support::slurp(dir / "default.csv"));
    ::setenv(cli::kSeedEnv, "abc", 1);
    const auto bad = run({"gen", "--preset", "CV", "--out", p("bad.csv")});
    ::unsetenv(cli::kSeedEnv);
    CHECK(bad.code != 0);
    CHECK(bad.err.rfind("error: validation:", 0) == 0);
}

TEST_CASE("failures are one machine-readable line and write nothing") {
    support::TempDir dir;
    const auto p = [&](const std::string& n) { return (dir / n).string(); };
    const auto unknown = run({"gen", "--preset", "Nope", "--out", p("g.csv")});
    CHECK(unknown.code != 0);
    CHECK(unknown.err.rfind("error: validation: unknown preset", 0) == 0);
    CHECK(std::count(unknown.err.begin(), unknown.err.end(), '\n') == 1);
    CHECK_FALSE(std::filesystem::exists(dir / "g.csv"));

    const auto missing = run({"extract", "--in", p("nothing.csv"), "--out", p("x")});
    CHECK(missing.err.rfind("error: io:", 0) == 0);
    CHECK_FALSE(std::filesystem::exists(dir / "x.params.csv"));

    const auto baddir = run({"trace", "--preset", "BL", "--out", p("no/such/dir.csv")});
    CHECK(baddir.err.rfind("error: io:", 0) == 0);

    CHECK(run({"ber", "--presets", "BL", "--ebn0", "5:0:1", "--out", p("b.csv")}).err.rfind("error: validation:", 0) ==
          0);
    CHECK(run({"ber", "--presets", "BL", "--cond", "DS", "--out", p("b.csv")}).code != 0);
    CHECK_FALSE(std::filesystem::exists(dir / "b.csv"));
    CHECK(run({"trace", "--preset", "BL", "--set", "bogus=1", "--out", p("t.csv")}).code != 0);
    CHECK(run({"frobnicate"}).code != 0);

    support::spit(dir / "bad.csv", "rx_id,rx_x_m\n");
    support::spit(dir / "bad.meta.json", dataset_meta_json(ScenarioDataset{}));
    const auto parse = run({"rssi", "--in", p("bad.csv"), "--out", p("r.csv")});
    CHECK(parse.err.rfind("error: parse: line 1", 0) == 0);
    CHECK_FALSE(std::filesystem::exists(dir / "r.csv"));
}

TEST_CASE("grid parsing") {
    CHECK(cli::parse_grid("0:2:30").size() == 16);
    CHECK(cli::parse_grid("0:2:30").back() == 30.0);
    CHECK(cli::parse_grid("0:0.1:1").size() == 11);
    CHECK(cli::parse_grid("7") == std::vector<double>{7.0});
    CHECK_THROWS_AS(cli::parse_grid("1:2"), ValidationError);
    CHECK_THROWS_AS(cli::parse_grid("a:1:2"), ValidationError);
    CHECK_THROWS_AS(cli::parse_grid("3:1:2"), ValidationError);
}

TEST_CASE("scene files drive the tracer") {
    support::TempDir dir;
    support::spit(dir / "scene.json", R"({
        "preset": "EmV",
        "name": "short-cabin",
        "cabin_dims_m": [6.0, 4.0, 2.4],
        "materials": {"Alu": {"pec": true}, "Panel": {"eps_re": 3.0, "eps_im": 0.1}},
        "walls": {"all": "Alu", "floor": "Panel"},
        "rx_grid": {"rows": [2.0, 4.0], "heights_m": [1.0], "lateral_step_m": 0.5},
        "blockers": [],
        "max_reflections": 1,
        "sensitivity_dbm": -90
    })");
    const auto spec = load_scene_config(dir / "scene.json");
    CHECK(spec.scene.name == "short-cabin");
    CHECK(spec.scene.blockers.empty());
    CHECK(spec.scene.rx_grid.size() == 16);
    CHECK(spec.scene.wall(Face::Floor).permittivity == std::complex<double>(3.0, -0.1));
    CHECK(spec.scene.wall(Face::Ceiling).is_pec);
    CHECK(*spec.sensitivity_dbm == -90.0);

    REQUIRE(run({"trace", "--scene", (dir / "scene.json").string(), "--out", (dir / "s.csv").string()}).code == 0);
    const auto ds = load_dataset(dir / "s.csv");
    CHECK(ds.scenario_name == "short-cabin");
    CHECK(ds.records.size() == 16);
    for (const auto& r : ds.records) CHECK(r.condition == Condition::LOS);

    CHECK_THROWS_AS(parse_scene_config(R"({"tx_m": [50, 1, 1]})"), GeometryError);
    CHECK_THROWS_AS(parse_scene_config(R"({"walls": {"all": "Unobtainium"}})"), ValidationError);
    CHECK_THROWS_AS(parse_scene_config(R"({"materials": {"X": {"eps_re": 3, "eps_im": -1}}})"), ValidationError);
    CHECK_THROWS_AS(parse_scene_config("{not json"), ValidationError);
}
