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

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "idschan/link_budget.hpp"
#include "idschan/pathdata.hpp"

namespace idschan {

/// Dielectric description of a surface. The permittivity is stored as
/// eps' - j eps'' (so the imaginary part is <= 0 for lossy media).
struct Material {
    std::string name;
    std::complex<double> permittivity{1.0, 0.0};
    double thickness_cm = 0.0;
    bool is_pec = false;

    bool operator==(const Material&) const = default;
};

namespace materials {
Material pec();
Material glass_carbon_composite();
Material human_skin();
Material nylon();
Material glass();
/// Looks up one of the built-in materials by name (PEC, GlassCarbon,
/// HumanSkin, Nylon, Glass).
std::optional<Material> by_name(std::string_view name);
} // namespace materials

/// Throws ValidationError on Re(eps) < 1 or a gain medium.
void validate(const Material& m);

enum class Polarization { TE, TM };

/// Fresnel amplitude reflection coefficient for a wave in air hitting a
/// half-space of the given material. incidence_rad is measured from the
/// surface normal and must lie in [0, pi/2).
std::complex<double> fresnel_reflection(const Material& m, double incidence_rad, Polarization pol);

/// Free-space path loss 20 log10(4 pi d / lambda) in dB.
double free_space_loss_db(double distance_m, double carrier_hz);

// Cabin faces of the axis-aligned box [0, L] x [0, W] x [0, H]. x runs from
// the front panel to the rear end, z is height above the floor.
enum class Face { Front, Rear, Left, Right, Floor, Ceiling };
inline constexpr std::array<Face, 6> kAllFaces{Face::Front, Face::Rear,  Face::Left,
                                               Face::Right, Face::Floor, Face::Ceiling};
std::string_view to_string(Face f) noexcept;
std::optional<Face> face_from_string(std::string_view s) noexcept;

enum class BlockerLabel { Seat, Human };

struct Blocker {
    Eigen::AlignedBox3d box;
    Material material;
    BlockerLabel label = BlockerLabel::Seat;
};

struct Scene {
    std::string name;
    Eigen::Vector3d cabin_dims_m{13.5, 4.0, 2.4};
    std::array<Material, 6> wall_materials;
    std::vector<Blocker> blockers;
    Eigen::Vector3d tx_position_m{0.05, 1.7, 2.1};
    std::vector<Eigen::Vector3d> rx_grid;
    double carrier_hz = 28e9;
    int max_reflections = 3;

    const Material& wall(Face f) const { return wall_materials[static_cast<std::size_t>(f)]; }
    Material& wall(Face f) { return wall_materials[static_cast<std::size_t>(f)]; }
};

enum class ScenarioPreset { BL, CV, RecV, EmV };
std::string_view to_string(ScenarioPreset p) noexcept;
std::optional<ScenarioPreset> preset_from_string(std::string_view s) noexcept;

/// Geometry knobs for build_scenario. Defaults describe a single 12-row,
/// 6-abreast compartment with receivers on 12 vertical surfaces.
struct CabinLayout {
    Eigen::Vector3d cabin_dims_m{13.5, 4.0, 2.4};
    Eigen::Vector3d tx_position_m{0.05, 1.7, 2.1};

    int rows = 12;
    double first_seat_center_x_m = 1.0;
    double row_pitch_m = 1.0;
    int seats_per_side = 3;
    double side_margin_m = 0.05; // gap between the outer seat and the side wall
    Eigen::Vector3d seat_size_m{0.5, 0.5, 1.2};

    // Seated passenger, relative to the seat center (x, y) and the floor (z).
    double human_front_offset_m = 0.35;
    double human_rear_offset_m = 0.10;
    double human_half_width_m = 0.20;
    double human_bottom_m = 0.45;
    double human_top_m = 1.60;

    // Receiver surfaces sit this far in front of the rear face of their seat.
    double rx_offset_from_seat_m = 0.75;
    std::vector<double> rx_heights_m{0.6, 0.7, 0.8, 0.9, 1.0};
    double lateral_step_m = 0.1;
    // Explicit receiver-surface x positions; replaces the per-row placement.
    std::optional<std::vector<double>> rx_surface_x_m;

    int max_reflections = 3;
    double carrier_hz = 28e9;
};

/// Builds the rectangular-cabin approximation of a scenario. BL, RecV and EmV
/// use PEC walls, CV uses glass-carbon composite; EmV has no passengers.
/// Throws GeometryError when TX or a receiver ends up outside the cabin or
/// inside a blocker.
Scene build_scenario(ScenarioPreset preset, const CabinLayout& layout = {});
/// Same as build_scenario without the final validate(); for callers that
/// still edit the scene.
Scene assemble_scenario(ScenarioPreset preset, const CabinLayout& layout = {});

/// Throws GeometryError unless TX and every grid point are strictly inside
/// the cabin and outside all blockers, and max_reflections/carrier are sane.
void validate(const Scene& scene);
void check_receiver(const Scene& scene, const Eigen::Vector3d& rx);

/// A specular path with its geometry kept for inspection.
struct TracedPath {
    std::vector<Eigen::Vector3d> vertices; // tx, reflection points..., rx
    std::vector<Face> faces;               // one per reflection
    double length_m = 0.0;                 // unfolded length
    double reflection_gain_db = 0.0;       // sum of 20 log10 |Gamma|

    int order() const noexcept { return static_cast<int>(faces.size()); }
};

/// All unblocked image-method paths from tx to rx of order <= max_reflections,
/// direct path first, then by order and face sequence. No power culling.
std::vector<TracedPath> trace_paths(const Scene& scene, const Eigen::Vector3d& tx,
                                    const Eigen::Vector3d& rx);

MultipathComponent to_component(const TracedPath& path, const LinkBudget& budget, double carrier_hz);

/// Multipath components from the scene TX to rx, culled at the budget's
/// sensitivity floor. The scene's carrier sets the wavelength.
std::vector<MultipathComponent> trace_link(const Scene& scene, const Eigen::Vector3d& rx,
                                           const LinkBudget& budget);

/// One record per grid point, in grid order. threads == 0 picks the
/// hardware concurrency.
ScenarioDataset trace_scenario(const Scene& scene, const LinkBudget& budget, unsigned threads = 0);

} // namespace idschan
