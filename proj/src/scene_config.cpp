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

#include "idschan/scene_config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "idschan/errors.hpp"

namespace idschan {

namespace {

using nlohmann::json;

Eigen::Vector3d vec3(const json& j, const char* key) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 3) throw ValidationError(fmt::format("scene config: '{}' needs 3 numbers", key));
    return {v[0], v[1], v[2]};
}

Material material_from_json(const std::string& name, const json& j) {
    Material m;
    m.name = name;
    m.is_pec = j.value("pec", false);
    m.thickness_cm = j.value("thickness_cm", 0.0);
    if (!m.is_pec) {
        const double eps_re = j.at("eps_re").get<double>();
        const double eps_im = j.value("eps_im", 0.0);
        if (eps_im < 0.0)
            throw ValidationError(fmt::format("scene config: material '{}': eps_im is eps'' and must be >= 0", name));
        m.permittivity = {eps_re, -eps_im};
    }
    validate(m);
    return m;
}

} // namespace

SceneSpec parse_scene_config(std::string_view json_text) {
    SceneSpec spec;
    try {
        const json j = json::parse(json_text);
        if (!j.is_object()) throw ValidationError("scene config: top level must be an object");

        ScenarioPreset preset = ScenarioPreset::BL;
        if (j.contains("preset")) {
            const auto name = j.at("preset").get<std::string>();
            const auto p = preset_from_string(name);
            if (!p) throw ValidationError("scene config: unknown preset '" + name + "'");
            preset = *p;
        }

        std::map<std::string, Material, std::less<>> library;
        for (auto m : {materials::pec(), materials::glass_carbon_composite(), materials::human_skin(),
                       materials::nylon(), materials::glass()})
            library.emplace(m.name, m);
        if (j.contains("materials"))
            for (const auto& [name, mj] : j.at("materials").items()) library[name] = material_from_json(name, mj);
        const auto lookup = [&](const std::string& name) {
            const auto it = library.find(name);
            if (it == library.end()) throw ValidationError("scene config: unknown material '" + name + "'");
            return it->second;
        };

        CabinLayout layout;
        if (j.contains("cabin_dims_m")) layout.cabin_dims_m = vec3(j.at("cabin_dims_m"), "cabin_dims_m");
        if (j.contains("tx_m")) layout.tx_position_m = vec3(j.at("tx_m"), "tx_m");
        if (j.contains("max_reflections")) layout.max_reflections = j.at("max_reflections").get<int>();
        if (j.contains("carrier_hz")) layout.carrier_hz = j.at("carrier_hz").get<double>();
        if (j.contains("rx_grid")) {
            const auto& g = j.at("rx_grid");
            if (g.contains("rows")) {
                const auto& rows = g.at("rows");
                if (rows.is_number_integer()) layout.rows = rows.get<int>();
                else layout.rx_surface_x_m = rows.get<std::vector<double>>();
            }
            if (g.contains("heights_m")) layout.rx_heights_m = g.at("heights_m").get<std::vector<double>>();
            if (g.contains("lateral_step_m")) layout.lateral_step_m = g.at("lateral_step_m").get<double>();
            if (!(layout.lateral_step_m > 0.0)) throw ValidationError("scene config: lateral_step_m must be > 0");
        }

        Scene scene = assemble_scenario(preset, layout);
        if (j.contains("name")) scene.name = j.at("name").get<std::string>();

        if (j.contains("walls")) {
            const auto& w = j.at("walls");
            if (w.contains("all")) scene.wall_materials.fill(lookup(w.at("all").get<std::string>()));
            for (const auto& [face_name, mat] : w.items()) {
                if (face_name == "all") continue;
                const auto f = face_from_string(face_name);
                if (!f) throw ValidationError("scene config: unknown wall face '" + face_name + "'");
                scene.wall(*f) = lookup(mat.get<std::string>());
            }
        }

        if (j.contains("blockers")) {
            scene.blockers.clear();
            for (const auto& bj : j.at("blockers")) {
                Blocker b;
                const auto label = bj.value("label", std::string("Seat"));
                if (label == "Seat") b.label = BlockerLabel::Seat;
                else if (label == "Human") b.label = BlockerLabel::Human;
                else throw ValidationError("scene config: unknown blocker label '" + label + "'");
                b.material = lookup(bj.value("material", b.label == BlockerLabel::Seat ? std::string("Nylon")
                                                                                        : std::string("HumanSkin")));
                const Eigen::Vector3d lo = vec3(bj.at("min"), "min");
                const Eigen::Vector3d hi = vec3(bj.at("max"), "max");
                if (!((lo.array() <= hi.array()).all())) throw ValidationError("scene config: blocker min > max");
                b.box = Eigen::AlignedBox3d(lo, hi);
                scene.blockers.push_back(b);
            }
        }

        if (j.contains("sensitivity_dbm")) spec.sensitivity_dbm = j.at("sensitivity_dbm").get<double>();
        validate(scene);
        spec.scene = std::move(scene);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scene config: ") + e.what());
    }
    return spec;
}

SceneSpec load_scene_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open scene config '" + path.string() + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_scene_config(buf.str());
}

} // namespace idschan
