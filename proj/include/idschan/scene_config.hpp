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

#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "idschan/tracer.hpp"

namespace idschan {

struct SceneSpec {
    Scene scene;
    std::optional<double> sensitivity_dbm;
};

/// Parses a JSON scene description. Recognised keys:
///   preset           base scenario (BL, CV, RecV, EmV); default BL
///   name             scene name
///   cabin_dims_m     [L, W, H]
///   materials        {name: {eps_re, eps_im, pec, thickness_cm}}; eps_im is eps'' (>= 0)
///   walls            {front|rear|left|right|floor|ceiling|all: material name}
///   tx_m             [x, y, z]
///   rx_grid          {rows: count | [x...], heights_m: [...], lateral_step_m}
///   blockers         [{label: Seat|Human, material, min: [..], max: [..]}]; replaces generated ones
///   max_reflections, carrier_hz, sensitivity_dbm
/// Throws ValidationError on schema problems and GeometryError on bad placement.
SceneSpec parse_scene_config(std::string_view json_text);
SceneSpec load_scene_config(const std::filesystem::path& path);

} // namespace idschan
