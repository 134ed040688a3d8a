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

#include "idschan/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <stdexcept>

#include <fmt/format.h>

#include "idschan/errors.hpp"
#include "idschan/parallel.hpp"

namespace idschan {

namespace materials {

Material pec() { return {"PEC", {1.0, 0.0}, 0.0, true}; }
Material glass_carbon_composite() { return {"GlassCarbon", {4.50, -0.05}, 0.3, false}; }
Material human_skin() { return {"HumanSkin", {19.3, -19.5}, 0.1, false}; }
Material nylon() { return {"Nylon", {3.01, -0.021}, 0.25, false}; }
Material glass() { return {"Glass", {6.27, -0.1469}, 0.3, false}; }

std::optional<Material> by_name(std::string_view name) {
    for (auto m : {pec(), glass_carbon_composite(), human_skin(), nylon(), glass()})
        if (m.name == name) return m;
    return std::nullopt;
}

} // namespace materials

void validate(const Material& m) {
    if (m.is_pec) return;
    if (!(m.permittivity.real() >= 1.0))
        throw ValidationError(fmt::format("material '{}': Re(eps) must be >= 1", m.name));
    if (m.permittivity.imag() > 0.0)
        throw ValidationError(fmt::format("material '{}': expected eps' - j eps'' with eps'' >= 0", m.name));
}

std::complex<double> fresnel_reflection(const Material& m, double incidence_rad, Polarization pol) {
    if (!(incidence_rad >= 0.0 && incidence_rad < std::numbers::pi / 2))
        throw std::invalid_argument("fresnel_reflection: incidence must lie in [0, pi/2)");
    if (m.is_pec) return pol == Polarization::TE ? -1.0 : 1.0;
    const double c = std::cos(incidence_rad);
    const double s = std::sin(incidence_rad);
    const std::complex<double> eps = m.permittivity;
    const std::complex<double> root = std::sqrt(eps - s * s);
    if (pol == Polarization::TE) return (c - root) / (c + root);
    return (eps * c - root) / (eps * c + root);
}

double free_space_loss_db(double distance_m, double carrier_hz) {
    const double lambda = kSpeedOfLight / carrier_hz;
    return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m / lambda);
}

std::string_view to_string(Face f) noexcept {
    switch (f) {
    case Face::Front: return "front";
    case Face::Rear: return "rear";
    case Face::Left: return "left";
    case Face::Right: return "right";
    case Face::Floor: return "floor";
    case Face::Ceiling: return "ceiling";
    }
    return "?";
}

std::optional<Face> face_from_string(std::string_view s) noexcept {
    for (auto f : kAllFaces)
        if (to_string(f) == s) return f;
    return std::nullopt;
}

std::string_view to_string(ScenarioPreset p) noexcept {
    switch (p) {
    case ScenarioPreset::BL: return "BL";
    case ScenarioPreset::CV: return "CV";
    case ScenarioPreset::RecV: return "RecV";
    case ScenarioPreset::EmV: return "EmV";
    }
    return "?";
}

std::optional<ScenarioPreset> preset_from_string(std::string_view s) noexcept {
    for (auto p : {ScenarioPreset::BL, ScenarioPreset::CV, ScenarioPreset::RecV, ScenarioPreset::EmV})
        if (to_string(p) == s) return p;
    if (s == "C-V") return ScenarioPreset::CV;
    if (s == "Rec-V") return ScenarioPreset::RecV;
    if (s == "Em-V") return ScenarioPreset::EmV;
    return std::nullopt;
}

namespace {

int face_axis(Face f) {
    switch (f) {
    case Face::Front:
    case Face::Rear: return 0;
    case Face::Left:
    case Face::Right: return 1;
    default: return 2;
    }
}

bool face_is_max(Face f) { return f == Face::Rear || f == Face::Right || f == Face::Ceiling; }

double face_value(const Scene& scene, Face f) { return face_is_max(f) ? scene.cabin_dims_m[face_axis(f)] : 0.0; }

// Vertical polarization: floor/ceiling bounces see the field in the plane of
// incidence, wall bounces see it perpendicular to it.
Polarization face_polarization(Face f) { return face_axis(f) == 2 ? Polarization::TM : Polarization::TE; }

Eigen::Vector3d mirror(const Eigen::Vector3d& p, int axis, double value) {
    Eigen::Vector3d out = p;
    out[axis] = 2.0 * value - p[axis];
    return out;
}

// Closed-box segment test (slab method); touching counts as a hit.
bool segment_hits(const Eigen::AlignedBox3d& box, const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
    const Eigen::Vector3d d = q - p;
    double t0 = 0.0;
    double t1 = 1.0;
    for (int a = 0; a < 3; ++a) {
        if (std::abs(d[a]) < 1e-15) {
            if (p[a] < box.min()[a] || p[a] > box.max()[a]) return false;
            continue;
        }
        double ta = (box.min()[a] - p[a]) / d[a];
        double tb = (box.max()[a] - p[a]) / d[a];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

bool segment_clear(const Scene& scene, const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
    for (const auto& b : scene.blockers)
        if (segment_hits(b.box, p, q)) return false;
    return true;
}

bool strictly_inside(const Scene& scene, const Eigen::Vector3d& p) {
    return (p.array() > 0.0).all() && (p.array() < scene.cabin_dims_m.array()).all();
}

constexpr double kEdgeTol = 1e-9;

struct ImageSearch {
    const Scene& scene;
    const Eigen::Vector3d& tx;
    const Eigen::Vector3d& rx;
    std::vector<TracedPath>& out;
    std::vector<Face> sequence;
    std::vector<Eigen::Vector3d> images;

    // Back-traces the current face sequence from rx; appends on success.
    void try_sequence() {
        const std::size_t k = sequence.size();
        std::vector<Eigen::Vector3d> pts(k + 2);
        pts[0] = tx;
        pts[k + 1] = rx;
        for (std::size_t i = k; i >= 1; --i) {
            const Face f = sequence[i - 1];
            const int axis = face_axis(f);
            const double value = face_value(scene, f);
            const Eigen::Vector3d& img = images[i - 1];
            const Eigen::Vector3d& next = pts[i + 1];
            const double denom = next[axis] - img[axis];
            if (std::abs(denom) < 1e-15) return;
            const double t = (value - img[axis]) / denom;
            if (!(t > kEdgeTol && t < 1.0 - kEdgeTol)) return;
            Eigen::Vector3d hit = img + t * (next - img);
            hit[axis] = value;
            for (int a = 0; a < 3; ++a) {
                if (a == axis) continue;
                if (!(hit[a] > kEdgeTol && hit[a] < scene.cabin_dims_m[a] - kEdgeTol)) return;
            }
            pts[i] = hit;
        }
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            if (!segment_clear(scene, pts[i], pts[i + 1])) return;

        TracedPath path;
        path.faces = sequence;
        path.length_m = k == 0 ? (rx - tx).norm() : (rx - images.back()).norm();
        for (std::size_t i = 1; i <= k; ++i) {
            const Face f = sequence[i - 1];
            const Eigen::Vector3d dir = (pts[i] - pts[i - 1]).normalized();
            const double cos_inc = std::min(1.0, std::abs(dir[face_axis(f)]));
            const auto gamma = fresnel_reflection(scene.wall(f), std::acos(cos_inc), face_polarization(f));
            path.reflection_gain_db += 20.0 * std::log10(std::abs(gamma));
        }
        path.vertices = std::move(pts);
        out.push_back(std::move(path));
    }

    // Breadth by order: paths come out sorted by reflection count.
    void run(int max_order) {
        try_sequence(); // direct
        for (int order = 1; order <= max_order; ++order) enumerate(order);
    }

    void enumerate(int order) {
        if (static_cast<int>(sequence.size()) == order) {
            try_sequence();
            return;
        }
        for (Face f : kAllFaces) {
            if (!sequence.empty() && sequence.back() == f) continue;
            const Eigen::Vector3d& src = images.empty() ? tx : images.back();
            sequence.push_back(f);
            images.push_back(mirror(src, face_axis(f), face_value(scene, f)));
            enumerate(order);
            sequence.pop_back();
            images.pop_back();
        }
    }
};

double wrap_azimuth_deg(double az) { return az <= -180.0 ? az + 360.0 : az; }

std::pair<double, double> direction_angles_deg(const Eigen::Vector3d& dir) {
    const Eigen::Vector3d u = dir.normalized();
    const double az = std::atan2(u.y(), u.x()) * 180.0 / std::numbers::pi;
    const double el = std::asin(std::clamp(u.z(), -1.0, 1.0)) * 180.0 / std::numbers::pi;
    return {wrap_azimuth_deg(az), el};
}

} // namespace

void check_receiver(const Scene& scene, const Eigen::Vector3d& rx) {
    if (!rx.allFinite() || !strictly_inside(scene, rx))
        throw GeometryError(fmt::format("receiver ({}, {}, {}) is not strictly inside the cabin", rx.x(),
                                        rx.y(), rx.z()));
    for (const auto& b : scene.blockers)
        if (b.box.contains(rx))
            throw GeometryError(fmt::format("receiver ({}, {}, {}) lies inside a blocker", rx.x(), rx.y(), rx.z()));
}

void validate(const Scene& scene) {
    if (!((scene.cabin_dims_m.array() > 0.0).all()) || !scene.cabin_dims_m.allFinite())
        throw GeometryError("cabin dimensions must be positive");
    if (scene.max_reflections < 0) throw GeometryError("max_reflections must be >= 0");
    if (!(scene.carrier_hz > 0.0)) throw GeometryError("carrier_hz must be positive");
    for (const auto& m : scene.wall_materials) validate(m);
    if (!strictly_inside(scene, scene.tx_position_m))
        throw GeometryError("transmitter is not strictly inside the cabin");
    for (const auto& b : scene.blockers)
        if (b.box.contains(scene.tx_position_m)) throw GeometryError("transmitter lies inside a blocker");
    for (const auto& rx : scene.rx_grid) check_receiver(scene, rx);
}

Scene build_scenario(ScenarioPreset preset, const CabinLayout& layout) {
    Scene scene = assemble_scenario(preset, layout);
    validate(scene);
    return scene;
}

Scene assemble_scenario(ScenarioPreset preset, const CabinLayout& layout) {
    Scene scene;
    scene.name = std::string(to_string(preset));
    scene.cabin_dims_m = layout.cabin_dims_m;
    scene.tx_position_m = layout.tx_position_m;
    scene.carrier_hz = layout.carrier_hz;
    scene.max_reflections = layout.max_reflections;
    const Material wall = preset == ScenarioPreset::CV ? materials::glass_carbon_composite() : materials::pec();
    scene.wall_materials.fill(wall);

    const bool with_humans = preset != ScenarioPreset::EmV;
    const double width = layout.cabin_dims_m.y();
    const Eigen::Vector3d seat = layout.seat_size_m;

    std::vector<double> seat_y;
    for (int s = 0; s < layout.seats_per_side; ++s) {
        seat_y.push_back(layout.side_margin_m + (s + 0.5) * seat.y());
        seat_y.push_back(width - layout.side_margin_m - (s + 0.5) * seat.y());
    }
    std::sort(seat_y.begin(), seat_y.end());

    std::vector<double> seat_x;
    for (int r = 0; r < layout.rows; ++r) seat_x.push_back(layout.first_seat_center_x_m + r * layout.row_pitch_m);

    for (double cx : seat_x) {
        for (double cy : seat_y) {
            Blocker b;
            b.label = BlockerLabel::Seat;
            b.material = materials::nylon();
            b.box = Eigen::AlignedBox3d(Eigen::Vector3d(cx - seat.x() / 2, cy - seat.y() / 2, 0.0),
                                        Eigen::Vector3d(cx + seat.x() / 2, cy + seat.y() / 2, seat.z()));
            scene.blockers.push_back(b);
        }
    }
    if (with_humans) {
        for (double cx : seat_x) {
            for (double cy : seat_y) {
                Blocker b;
                b.label = BlockerLabel::Human;
                b.material = materials::human_skin();
                b.box = Eigen::AlignedBox3d(
                    Eigen::Vector3d(cx - layout.human_front_offset_m, cy - layout.human_half_width_m,
                                    layout.human_bottom_m),
                    Eigen::Vector3d(cx + layout.human_rear_offset_m, cy + layout.human_half_width_m, layout.human_top_m));
                scene.blockers.push_back(b);
            }
        }
    }

    std::vector<double> surfaces;
    if (layout.rx_surface_x_m) {
        surfaces = *layout.rx_surface_x_m;
    } else {
        for (double cx : seat_x) surfaces.push_back(cx + seat.x() / 2 - layout.rx_offset_from_seat_m);
    }
    const int lateral = static_cast<int>(std::floor(width / layout.lateral_step_m + 1e-9));
    for (double x : surfaces)
        for (double z : layout.rx_heights_m)
            for (int k = 0; k < lateral; ++k) scene.rx_grid.emplace_back(x, (k + 0.5) * layout.lateral_step_m, z);
    return scene;
}

std::vector<TracedPath> trace_paths(const Scene& scene, const Eigen::Vector3d& tx, const Eigen::Vector3d& rx) {
    std::vector<TracedPath> out;
    ImageSearch search{scene, tx, rx, out, {}, {}};
    search.run(scene.max_reflections);
    return out;
}

MultipathComponent to_component(const TracedPath& path, const LinkBudget& budget, double carrier_hz) {
    MultipathComponent c;
    c.power_dbm = budget.effective_tx_dbm() - free_space_loss_db(path.length_m, carrier_hz) + path.reflection_gain_db;
    c.delay_ns = path.length_m / kSpeedOfLight * 1e9;
    const auto& v = path.vertices;
    std::tie(c.aod_az_deg, c.aod_el_deg) = direction_angles_deg(v[1] - v[0]);
    std::tie(c.aoa_az_deg, c.aoa_el_deg) = direction_angles_deg(v[v.size() - 2] - v.back());
    if (path.faces.empty()) c.interactions = {Interaction::Direct};
    else c.interactions.assign(path.faces.size(), Interaction::Reflect);
    return c;
}

std::vector<MultipathComponent> trace_link(const Scene& scene, const Eigen::Vector3d& rx, const LinkBudget& budget) {
    check_receiver(scene, rx);
    std::vector<MultipathComponent> out;
    for (const auto& path : trace_paths(scene, scene.tx_position_m, rx)) {
        auto c = to_component(path, budget, scene.carrier_hz);
        if (c.power_dbm >= budget.sensitivity_dbm) out.push_back(std::move(c));
    }
    return out;
}

ScenarioDataset trace_scenario(const Scene& scene, const LinkBudget& budget, unsigned threads) {
    validate(scene);
    validate(budget);
    ScenarioDataset ds;
    ds.scenario_name = scene.name;
    ds.tx_position_m = scene.tx_position_m;
    ds.link_budget = budget;
    ds.link_budget.carrier_hz = scene.carrier_hz;
    ds.provenance = Provenance::Synthetic;
    ds.records.resize(scene.rx_grid.size());
    parallel_for(scene.rx_grid.size(), threads, [&](std::size_t i) {
        auto& rec = ds.records[i];
        rec.rx_id = static_cast<int>(i);
        rec.position_m = scene.rx_grid[i];
        rec.paths = trace_link(scene, scene.rx_grid[i], ds.link_budget);
    });
    finalize_records(ds);
    return ds;
}

} // namespace idschan
