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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "idschan/link_budget.hpp"

namespace idschan {

enum class Interaction { Direct, Reflect, Diffract, DiffuseScatter };

enum class Condition { LOS, NLOS, DS, Outage };

enum class Provenance { Synthetic, Ingested };

/// One ray path at a receiver. Angles follow the usual convention: azimuth
/// in (-180, 180], elevation in [-90, 90], both in degrees. The arrival
/// direction points from the receiver back along the incoming ray.
struct MultipathComponent {
    double power_dbm = 0.0;
    double delay_ns = 0.0;
    double aod_az_deg = 0.0;
    double aod_el_deg = 0.0;
    double aoa_az_deg = 0.0;
    double aoa_el_deg = 0.0;
    std::vector<Interaction> interactions;

    bool is_direct() const noexcept {
        return interactions.size() == 1 && interactions.front() == Interaction::Direct;
    }

    bool operator==(const MultipathComponent&) const = default;
};

struct RxRecord {
    int rx_id = 0;
    Eigen::Vector3d position_m = Eigen::Vector3d::Zero();
    double distance_3d_m = 0.0;
    std::vector<MultipathComponent> paths;
    Condition condition = Condition::Outage;

    bool operator==(const RxRecord&) const = default;
};

struct ScenarioDataset {
    std::string scenario_name;
    Eigen::Vector3d tx_position_m = Eigen::Vector3d::Zero();
    LinkBudget link_budget;
    std::vector<RxRecord> records;
    Provenance provenance = Provenance::Synthetic;

    bool operator==(const ScenarioDataset&) const = default;
};

/// LOS when a lone-Direct path exists, DS when every path carries a
/// DiffuseScatter tag, Outage when there are no paths, NLOS otherwise.
Condition classify(std::span<const MultipathComponent> paths) noexcept;

std::string_view to_string(Condition c) noexcept;
std::string_view to_string(Provenance p) noexcept;
std::optional<Condition> condition_from_string(std::string_view s) noexcept;

// Single-letter tags joined with '+': L, R, D, S.
std::string format_interactions(std::span<const Interaction> tags);
std::optional<std::vector<Interaction>> parse_interactions(std::string_view text);

// Throws ValidationError naming the offending rx_id.
void validate(const MultipathComponent& path, int rx_id);
void validate(const ScenarioDataset& ds);

/// Fills distance_3d_m and condition of every record from the dataset's TX
/// position and the path lists.
void finalize_records(ScenarioDataset& ds);

/// `<dir>/<stem>.meta.json` for a dataset file `<dir>/<stem>.csv`.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Reads the CSV path table and its JSON sidecar. Conditions are always
/// recomputed. Throws ParseError (with line number), ValidationError, IoError.
ScenarioDataset load_dataset(const std::filesystem::path& csv_path);

/// Writes the CSV path table and its JSON sidecar. Numbers are written in
/// shortest round-trip form so load_dataset reproduces them exactly.
void save_dataset(const ScenarioDataset& ds, const std::filesystem::path& csv_path);

// Stream-level variants used by save/load and by tests.
std::string dataset_csv(const ScenarioDataset& ds);
std::string dataset_meta_json(const ScenarioDataset& ds);

} // namespace idschan
