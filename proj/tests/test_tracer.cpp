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
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "idschan/errors.hpp"
#include "idschan/tracer.hpp"
#include "oracles.hpp"

using namespace idschan;

namespace {

Scene empty_box(const Material& walls, int max_reflections) {
    Scene s;
    s.name = "box";
    s.wall_materials.fill(walls);
    s.max_reflections = max_reflections;
    s.tx_position_m = {2.0, 1.5, 1.2};
    return s;
}

Eigen::Vector3d random_free_point(const Scene& s, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (;;) {
        const Eigen::Vector3d p(u(rng) * s.cabin_dims_m.x(), u(rng) * s.cabin_dims_m.y(), u(rng) * s.cabin_dims_m.z());
        const bool inside = std::any_of(s.blockers.begin(), s.blockers.end(),
                                        [&](const Blocker& b) { return b.box.contains(p); });
        if (!inside) return p;
    }
}

Eigen::Vector3d mirror(const Eigen::Vector3d& p, Face f, const Eigen::Vector3d& dims) {
    Eigen::Vector3d q = p;
    switch (f) {
    case Face::Front: q.x() = -p.x(); break;
    case Face::Rear: q.x() = 2 * dims.x() - p.x(); break;
    case Face::Left: q.y() = -p.y(); break;
    case Face::Right: q.y() = 2 * dims.y() - p.y(); break;
    case Face::Floor: q.z() = -p.z(); break;
    case Face::Ceiling: q.z() = 2 * dims.z() - p.z(); break;
    }
    return q;
}

} // namespace

TEST_CASE("Fresnel coefficient of a perfect conductor") {
    for (double a : {0.0, 0.3, 1.0, 1.5}) {
        CHECK(std::abs(fresnel_reflection(materials::pec(), a, Polarization::TE)) == 1.0);
        CHECK(std::abs(fresnel_reflection(materials::pec(), a, Polarization::TM)) == 1.0);
    }
}

TEST_CASE("Fresnel coefficient of glass at normal incidence") {
    const std::complex<double> eps(6.27, -0.1469);
    const auto root = std::sqrt(eps);
    const double expected = std::abs((1.0 - root) / (1.0 + root));
    CHECK(expected == doctest::Approx(0.429).epsilon(2e-3));
    CHECK(expected * expected == doctest::Approx(0.184).epsilon(5e-3));
    for (auto pol : {Polarization::TE, Polarization::TM})
        CHECK(std::abs(fresnel_reflection(materials::glass(), 0.0, pol)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("Fresnel grazing limit and passivity") {
    for (const auto& m : {materials::glass(), materials::nylon(), materials::human_skin(),
                          materials::glass_carbon_composite()}) {
        CHECK(std::abs(fresnel_reflection(m, std::numbers::pi / 2 - 1e-7, Polarization::TE)) > 0.999);
        for (int i = 0; i < 200; ++i) {
            const double a = i * (std::numbers::pi / 2) / 200;
            CHECK(std::abs(fresnel_reflection(m, a, Polarization::TE)) <= 1.0);
            CHECK(std::abs(fresnel_reflection(m, a, Polarization::TM)) <= 1.0);
        }
    }
    CHECK_THROWS_AS(fresnel_reflection(materials::glass(), std::numbers::pi / 2, Polarization::TE),
                    std::invalid_argument);
    CHECK_THROWS_AS(fresnel_reflection(materials::glass(), -0.1, Polarization::TE), std::invalid_argument);
}

TEST_CASE("Friis direct path at one metre") {
    auto s = empty_box(materials::pec(), 0);
    const Eigen::Vector3d rx = s.tx_position_m + Eigen::Vector3d(1.0, 0.0, 0.0);
    const auto paths = trace_link(s, rx, LinkBudget{});
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].is_direct());
    CHECK(paths[0].power_dbm == doctest::Approx(oracle::friis_dbm(20.0, 1.0, 28e9)).epsilon(1e-12));
    CHECK(paths[0].power_dbm == doctest::Approx(-41.4).epsilon(1e-3));
    CHECK(paths[0].delay_ns == doctest::Approx(3.3356).epsilon(1e-4));
    CHECK(paths[0].aod_az_deg == doctest::Approx(0.0));
    CHECK(paths[0].aoa_az_deg == doctest::Approx(180.0));
}

TEST_CASE("a blocker across the segment removes the direct path") {
    auto s = empty_box(materials::pec(), 0);
    const Eigen::Vector3d rx = s.tx_position_m + Eigen::Vector3d(2.0, 0.0, 0.0);
    Blocker b;
    b.box = Eigen::AlignedBox3d(Eigen::Vector3d(2.9, 1.3, 1.0), Eigen::Vector3d(3.1, 1.7, 1.4));
    b.material = materials::nylon();
    s.blockers.push_back(b);
    CHECK(trace_link(s, rx, LinkBudget{}).empty());
}

TEST_CASE("first-order images in an empty PEC box") {
    auto s = empty_box(materials::pec(), 1);
    const Eigen::Vector3d rx(7.0, 2.6, 0.9);
    const auto traced = trace_paths(s, s.tx_position_m, rx);
    REQUIRE(traced.size() == 7);
    const auto comps = trace_link(s, rx, LinkBudget{});
    REQUIRE(comps.size() == 7);
    CHECK(comps[0].is_direct());

    std::vector<double> expected{(rx - s.tx_position_m).norm()};
    for (Face f : kAllFaces) expected.push_back((mirror(s.tx_position_m, f, s.cabin_dims_m) - rx).norm());
    std::vector<double> got;
    for (const auto& p : traced) got.push_back(p.length_m);
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    for (std::size_t i = 0; i < 7; ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-12));

    for (std::size_t i = 0; i < traced.size(); ++i) {
        CHECK(comps[i].power_dbm == doctest::Approx(oracle::friis_dbm(20.0, traced[i].length_m, 28e9)).epsilon(1e-12));
        CHECK(comps[i].delay_ns == doctest::Approx(traced[i].length_m / 299792458.0 * 1e9).epsilon(1e-12));
    }
}

TEST_CASE("image paths are geometrically valid") {
    const auto s = build_scenario(ScenarioPreset::CV);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const auto rx = random_free_point(s, rng);
        for (const auto& p : trace_paths(s, s.tx_position_m, rx)) {
            REQUIRE(p.vertices.size() == p.faces.size() + 2);
            double sum = 0;
            for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) sum += (p.vertices[i + 1] - p.vertices[i]).norm();
            CHECK(oracle::rel_close(sum, p.length_m, 1e-9));
            for (std::size_t k = 0; k < p.faces.size(); ++k) {
                const auto& v = p.vertices[k + 1];
                for (int a = 0; a < 3; ++a) {
                    CHECK(v[a] >= -1e-9);
                    CHECK(v[a] <= s.cabin_dims_m[a] + 1e-9);
                }
                double on_face = 0;
                switch (p.faces[k]) {
                case Face::Front: on_face = v.x(); break;
                case Face::Rear: on_face = v.x() - s.cabin_dims_m.x(); break;
                case Face::Left: on_face = v.y(); break;
                case Face::Right: on_face = v.y() - s.cabin_dims_m.y(); break;
                case Face::Floor: on_face = v.z(); break;
                case Face::Ceiling: on_face = v.z() - s.cabin_dims_m.z(); break;
                }
                CHECK(std::abs(on_face) < 1e-9);
            }
        }
    }
}

TEST_CASE("path power never exceeds Friis at the unfolded length") {
    const auto s = build_scenario(ScenarioPreset::CV);
    const LinkBudget budget;
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const auto rx = random_free_point(s, rng);
        for (const auto& p : trace_paths(s, s.tx_position_m, rx)) {
            const auto c = to_component(p, budget, s.carrier_hz);
            CHECK(c.power_dbm <= oracle::friis_dbm(20.0, p.length_m, s.carrier_hz) + 1e-9);
        }
    }
}

TEST_CASE("path lengths are reciprocal") {
    const auto s = build_scenario(ScenarioPreset::BL);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = random_free_point(s, rng);
        const auto b = random_free_point(s, rng);
        std::vector<double> ab, ba;
        for (const auto& p : trace_paths(s, a, b)) ab.push_back(p.length_m);
        for (const auto& p : trace_paths(s, b, a)) ba.push_back(p.length_m);
        REQUIRE(ab.size() == ba.size());
        std::sort(ab.begin(), ab.end());
        std::sort(ba.begin(), ba.end());
        for (std::size_t i = 0; i < ab.size(); ++i) CHECK(oracle::rel_close(ab[i], ba[i], 1e-9));
    }
}

TEST_CASE("raising max_reflections keeps every earlier path") {
    auto s = build_scenario(ScenarioPreset::BL);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 15; ++trial) {
        const auto rx = random_free_point(s, rng);
        std::vector<std::vector<Face>> previous;
        for (int order = 0; order <= 3; ++order) {
            s.max_reflections = order;
            std::vector<std::vector<Face>> current;
            for (const auto& p : trace_paths(s, s.tx_position_m, rx)) current.push_back(p.faces);
            for (const auto& seq : previous) CHECK(std::find(current.begin(), current.end(), seq) != current.end());
            previous = current;
        }
    }
}

TEST_CASE("scenario presets") {
    const auto count = [](const Scene& s, BlockerLabel l) {
        return std::count_if(s.blockers.begin(), s.blockers.end(), [&](const Blocker& b) { return b.label == l; });
    };
    const auto bl = build_scenario(ScenarioPreset::BL);
    CHECK(bl.rx_grid.size() == 2400);
    CHECK(count(bl, BlockerLabel::Seat) == 72);
    CHECK(count(bl, BlockerLabel::Human) == 72);
    CHECK(bl.max_reflections == 3);
    for (Face f : kAllFaces) CHECK(bl.wall(f).is_pec);
    CHECK(bl.tx_position_m.z() == doctest::Approx(2.1));
    CHECK(std::abs(bl.tx_position_m.y()) == doctest::Approx(1.7));

    const auto em = build_scenario(ScenarioPreset::EmV);
    CHECK(count(em, BlockerLabel::Human) == 0);
    CHECK(count(em, BlockerLabel::Seat) == 72);
    CHECK(em.rx_grid == bl.rx_grid);

    const auto cv = build_scenario(ScenarioPreset::CV);
    for (Face f : kAllFaces) CHECK(cv.wall(f) == materials::glass_carbon_composite());
    CHECK(count(cv, BlockerLabel::Human) == 72);

    CHECK(preset_from_string("Em-V") == ScenarioPreset::EmV);
    CHECK(preset_from_string("C-V") == ScenarioPreset::CV);
    CHECK_FALSE(preset_from_string("nope").has_value());
}

TEST_CASE("scene validation") {
    CabinLayout outside;
    outside.tx_position_m = {-0.1, 1.7, 2.1};
    CHECK_THROWS_AS(build_scenario(ScenarioPreset::BL, outside), GeometryError);
    CabinLayout tall;
    tall.rx_heights_m = {2.5};
    CHECK_THROWS_AS(build_scenario(ScenarioPreset::BL, tall), GeometryError);
    CabinLayout los_only;
    los_only.max_reflections = 0;
    CHECK(build_scenario(ScenarioPreset::BL, los_only).max_reflections == 0);
    auto s = build_scenario(ScenarioPreset::BL);
    s.max_reflections = -1;
    CHECK_THROWS_AS(validate(s), GeometryError);
    s = build_scenario(ScenarioPreset::BL);
    const Eigen::Vector3d seat_center = s.blockers.front().box.center();
    CHECK_THROWS_AS(check_receiver(s, seat_center), GeometryError);
}

TEST_CASE("scenario tracing is deterministic and schedule independent") {
    auto s = build_scenario(ScenarioPreset::BL);
    const LinkBudget budget;
    const auto a = trace_scenario(s, budget, 1);
    const auto b = trace_scenario(s, budget, 4);
    CHECK(a == b);
    REQUIRE(a.records.size() == 2400);
    CHECK(a.provenance == Provenance::Synthetic);
    std::size_t los = 0;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].rx_id == static_cast<int>(i));
        CHECK(a.records[i].position_m == s.rx_grid[i]);
        los += a.records[i].condition == Condition::LOS;
    }
    CHECK(los > 0);
    CHECK(los < a.records.size());
}

TEST_CASE("removing passengers never removes a direct path") {
    const LinkBudget budget;
    const auto bl = trace_scenario(build_scenario(ScenarioPreset::BL), budget, 1);
    const auto em = trace_scenario(build_scenario(ScenarioPreset::EmV), budget, 1);
    REQUIRE(bl.records.size() == em.records.size());
    for (std::size_t i = 0; i < bl.records.size(); ++i)
        if (bl.records[i].condition == Condition::LOS) CHECK(em.records[i].condition == Condition::LOS);
}

TEST_CASE("sensitivity floor culls weak paths") {
    auto s = empty_box(materials::glass(), 3);
    const Eigen::Vector3d rx(9.0, 3.0, 0.5);
    LinkBudget loose;
    LinkBudget strict;
    strict.sensitivity_dbm = -70.0;
    const auto all = trace_link(s, rx, loose);
    const auto kept = trace_link(s, rx, strict);
    CHECK(kept.size() < all.size());
    for (const auto& p : kept) CHECK(p.power_dbm >= -70.0);
}
