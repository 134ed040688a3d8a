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
#include <random>

#include <doctest.h>

#include "idschan/errors.hpp"
#include "idschan/pathdata.hpp"
#include "support.hpp"

using namespace idschan;

namespace {

MultipathComponent path(std::vector<Interaction> tags, double power = -60.0, double delay = 10.0) {
    MultipathComponent m;
    m.power_dbm = power;
    m.delay_ns = delay;
    m.interactions = std::move(tags);
    return m;
}

ScenarioDataset random_dataset(std::uint64_t seed, int n_records) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScenarioDataset ds;
    ds.scenario_name = "random-" + std::to_string(seed);
    ds.tx_position_m = {u(rng) * 3, u(rng) * 3, u(rng) * 3};
    ds.link_budget.tx_power_dbm = 10 + u(rng);
    ds.link_budget.gain_rx_dbi = u(rng);
    ds.link_budget.line_loss_db = u(rng) / 3;
    ds.provenance = seed % 2 ? Provenance::Ingested : Provenance::Synthetic;
    const std::vector<Interaction> pool{Interaction::Reflect, Interaction::Diffract, Interaction::DiffuseScatter};
    for (int i = 0; i < n_records; ++i) {
        RxRecord r;
        r.rx_id = 3 * i + 1;
        r.position_m = {10 * u(rng), 4 * u(rng), 2 * u(rng) + 1e-7};
        const int n_paths = static_cast<int>(u(rng) * 6);
        for (int k = 0; k < n_paths; ++k) {
            MultipathComponent m;
            m.power_dbm = -150 + 120 * u(rng);
            m.delay_ns = 1e-3 + 300 * u(rng);
            m.aod_az_deg = 180 - 359.99999 * u(rng);
            m.aoa_az_deg = 180 - 359.99999 * u(rng);
            m.aod_el_deg = 90 - 180 * u(rng);
            m.aoa_el_deg = 90 - 180 * u(rng);
            if (k == 0 && u(rng) < 0.5) {
                m.interactions = {Interaction::Direct};
            } else {
                const int depth = 1 + static_cast<int>(u(rng) * 3);
                for (int d = 0; d < depth; ++d) m.interactions.push_back(pool[static_cast<std::size_t>(u(rng) * 3)]);
            }
            r.paths.push_back(m);
        }
        ds.records.push_back(r);
    }
    finalize_records(ds);
    return ds;
}

} // namespace

TEST_CASE("classify follows the tag rules") {
    using I = Interaction;
    const std::vector<MultipathComponent> los{path({I::Direct}), path({I::Reflect})};
    const std::vector<MultipathComponent> nlos{path({I::Reflect, I::Reflect}), path({I::Diffract})};
    const std::vector<MultipathComponent> ds{path({I::DiffuseScatter}), path({I::Reflect, I::DiffuseScatter})};
    const std::vector<MultipathComponent> mixed{path({I::DiffuseScatter}), path({I::Reflect})};
    CHECK(classify(los) == Condition::LOS);
    CHECK(classify(nlos) == Condition::NLOS);
    CHECK(classify(ds) == Condition::DS);
    CHECK(classify(mixed) == Condition::NLOS);
    CHECK(classify(std::vector<MultipathComponent>{}) == Condition::Outage);
}

TEST_CASE("classify ignores path order") {
    const auto ds = random_dataset(7, 300);
    std::mt19937_64 rng(11);
    for (const auto& r : ds.records) {
        auto paths = r.paths;
        const auto expected = classify(paths);
        for (int rep = 0; rep < 5; ++rep) {
            std::shuffle(paths.begin(), paths.end(), rng);
            CHECK(classify(paths) == expected);
        }
    }
}

TEST_CASE("interaction strings round-trip") {
    using I = Interaction;
    const std::vector<I> tags{I::Reflect, I::Reflect, I::Diffract};
    CHECK(format_interactions(tags) == "R+R+D");
    CHECK(*parse_interactions("R+R+D") == tags);
    CHECK(*parse_interactions("L") == std::vector<I>{I::Direct});
    CHECK_FALSE(parse_interactions("R+X").has_value());
    CHECK_FALSE(parse_interactions("R++R").has_value());
}

TEST_CASE("path validation") {
    CHECK_NOTHROW(validate(path({Interaction::Direct}), 1));
    CHECK_THROWS_AS(validate(path({Interaction::Direct}, -60, -1.0), 1), ValidationError);
    CHECK_THROWS_AS(validate(path({Interaction::Direct}, -60, 0.0), 1), ValidationError);
    auto bad_az = path({Interaction::Reflect});
    bad_az.aoa_az_deg = -180.0;
    CHECK_THROWS_AS(validate(bad_az, 1), ValidationError);
    auto bad_el = path({Interaction::Reflect});
    bad_el.aod_el_deg = 90.5;
    CHECK_THROWS_AS(validate(bad_el, 1), ValidationError);
    CHECK_THROWS_AS(validate(path({Interaction::Direct, Interaction::Reflect}), 1), ValidationError);
    try {
        validate(path({Interaction::Direct}, -60, -1.0), 42);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("42") != std::string::npos);
    }
}

TEST_CASE("save then load is the identity") {
    support::TempDir dir;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto ds = random_dataset(seed, 40);
        const auto file = dir / ("ds" + std::to_string(seed) + ".csv");
        save_dataset(ds, file);
        const auto back = load_dataset(file);
        REQUIRE(back.records.size() == ds.records.size());
        CHECK(back == ds);
    }
}

TEST_CASE("full-size dataset round-trips") {
    support::TempDir dir;
    const auto ds = random_dataset(99, 2400);
    save_dataset(ds, dir / "big.csv");
    CHECK(load_dataset(dir / "big.csv") == ds);
}

TEST_CASE("empty and outage datasets") {
    support::TempDir dir;
    ScenarioDataset empty;
    empty.scenario_name = "empty";
    save_dataset(empty, dir / "empty.csv");
    const auto text = support::slurp(dir / "empty.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    CHECK(text.rfind("rx_id,rx_x_m", 0) == 0);
    CHECK(load_dataset(dir / "empty.csv").records.empty());

    ScenarioDataset ds;
    ds.scenario_name = "outage";
    RxRecord r;
    r.rx_id = 5;
    r.position_m = {1, 1, 1};
    ds.records.push_back(r);
    finalize_records(ds);
    save_dataset(ds, dir / "outage.csv");
    CHECK(support::slurp(dir / "outage.csv").find("-INF") != std::string::npos);
    const auto back = load_dataset(dir / "outage.csv");
    REQUIRE(back.records.size() == 1);
    CHECK(back.records[0].paths.empty());
    CHECK(back.records[0].condition == Condition::Outage);
}

TEST_CASE("loader recomputes conditions and distances") {
    const auto ds = random_dataset(3, 100);
    for (const auto& r : ds.records) {
        CHECK(r.condition == classify(r.paths));
        CHECK(r.distance_3d_m == doctest::Approx((r.position_m - ds.tx_position_m).norm()).epsilon(1e-12));
    }
}

TEST_CASE("loader error reporting") {
    support::TempDir dir;
    ScenarioDataset ds;
    ds.scenario_name = "bad";
    const auto meta = dataset_meta_json(ds);
    const std::string header =
        "rx_id,rx_x_m,rx_y_m,rx_z_m,power_dbm,delay_ns,aod_az_deg,aod_el_deg,aoa_az_deg,aoa_el_deg,interactions\n";

    support::spit(dir / "neg.csv", header + "1,1,1,1,-50,-1,0,0,0,0,L\n");
    support::spit(dir / "neg.meta.json", meta);
    CHECK_THROWS_AS(load_dataset(dir / "neg.csv"), ValidationError);

    support::spit(dir / "malformed.csv", header + "1,1,1,1,-50,3,0,0,0,0,L\n2,1,1,1,abc,3,0,0,0,0,R\n");
    support::spit(dir / "malformed.meta.json", meta);
    try {
        load_dataset(dir / "malformed.csv");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).rfind("line 3", 0) == 0);
    }

    support::spit(dir / "short.csv", header + "1,1,1,1,-50,3,0,0\n");
    support::spit(dir / "short.meta.json", meta);
    CHECK_THROWS_AS(load_dataset(dir / "short.csv"), ParseError);

    support::spit(dir / "nometa.csv", header);
    CHECK_THROWS_AS(load_dataset(dir / "nometa.csv"), IoError);
    CHECK_THROWS_AS(load_dataset(dir / "missing.csv"), IoError);
}

TEST_CASE("two-record file") {
    support::TempDir dir;
    ScenarioDataset ds;
    ds.scenario_name = "two";
    support::spit(dir / "two.meta.json", dataset_meta_json(ds));
    support::spit(dir / "two.csv",
                  "rx_id,rx_x_m,rx_y_m,rx_z_m,power_dbm,delay_ns,aod_az_deg,aod_el_deg,aoa_az_deg,aoa_el_deg,"
                  "interactions\n"
                  "0,1,0,0,-41.4,3.336,0,0,180,0,L\n"
                  "0,1,0,0,-50,10,45,10,135,-10,R\n"
                  "1,2,0,0,-60,12,0,0,180,0,R+R\n");
    const auto back = load_dataset(dir / "two.csv");
    REQUIRE(back.records.size() == 2);
    CHECK(back.records[0].condition == Condition::LOS);
    CHECK(back.records[0].paths.size() == 2);
    CHECK(back.records[1].condition == Condition::NLOS);
    CHECK(back.records[1].distance_3d_m == doctest::Approx(2.0));
}

TEST_CASE("duplicate ids with different positions are rejected") {
    support::TempDir dir;
    ScenarioDataset ds;
    support::spit(dir / "dup.meta.json", dataset_meta_json(ds));
    support::spit(dir / "dup.csv",
                  "rx_id,rx_x_m,rx_y_m,rx_z_m,power_dbm,delay_ns,aod_az_deg,aod_el_deg,aoa_az_deg,aoa_el_deg,"
                  "interactions\n"
                  "0,1,0,0,-50,3,0,0,180,0,L\n"
                  "0,2,0,0,-50,10,45,10,135,-10,R\n");
    CHECK_THROWS_AS(load_dataset(dir / "dup.csv"), Error);
}
