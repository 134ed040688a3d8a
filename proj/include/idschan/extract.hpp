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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "idschan/link_budget.hpp"
#include "idschan/params.hpp"
#include "idschan/pathdata.hpp"

namespace idschan {

/// Path loss against the total received power of a record, in dB.
/// Throws NoPathError for an Outage record.
double path_loss_of(const RxRecord& record, const LinkBudget& budget);

struct PathLossFit {
    double A_db = 0.0; // intercept at d0 = 1 m
    double B = 0.0;    // slope per 10 log10(d)
    double sigma_sf_db = 0.0;
    Condition condition = Condition::LOS;
    std::size_t n_points = 0;
};

/// Ordinary least squares of PL on 10 log10(d / 1 m); shadow fading is the
/// n-1 sample deviation of the residuals. Throws FitError on fewer than two
/// points or a degenerate distance set.
PathLossFit fit_path_loss(std::span<const double> distances_m, std::span<const double> path_loss_db);
PathLossFit fit_path_loss(const ScenarioDataset& ds, Condition condition);

enum class KfReference { DirectPath, StrongestPath };

/// K-factor in dB: reference path power over the summed power of the rest.
/// With DirectPath, records without a direct path give nullopt; a record
/// whose only path is the reference gives +inf.
std::optional<double> k_factor(const RxRecord& record, KfReference ref = KfReference::DirectPath);

/// RMS delay spread in ns. Throws NoPathError for an empty record.
double rms_delay_spread(const RxRecord& record);

enum class SpreadKind { ASD, ASA, ESD, ESA };
inline constexpr std::array<SpreadKind, 4> kAllSpreads{SpreadKind::ASD, SpreadKind::ASA, SpreadKind::ESD,
                                                       SpreadKind::ESA};
std::string_view to_string(SpreadKind k) noexcept;

/// RMS angular spread in degrees (computed in radians).
/// Throws NoPathError for an empty record.
double angular_spread(const RxRecord& record, SpreadKind which);

struct ConditionRatios {
    std::array<double, 4> ratio{}; // indexed by Condition
    std::array<std::size_t, 4> count{};
    std::size_t total = 0;

    double of(Condition c) const { return ratio[static_cast<std::size_t>(c)]; }
};

ConditionRatios condition_ratios(const ScenarioDataset& ds);

struct PathLossResidual {
    int rx_id = 0;
    Condition condition = Condition::LOS;
    double distance_3d_m = 0.0;
    double path_loss_db = 0.0;
    double fitted_db = 0.0;
    double residual_db = 0.0;
};

struct SummarizeOptions {
    KfReference kf_reference = KfReference::DirectPath;
    unsigned threads = 1;
};

struct Summary {
    ChannelParamSet params; // condition blocks are absent when no record has that condition
    std::optional<PathLossFit> los_fit;
    std::optional<PathLossFit> nlos_fit;
    ConditionRatios ratios;
    std::vector<PathLossResidual> residuals;
    std::size_t infinite_kf_records = 0; // LOS records with a single path
};

/// Table statistics per LOS/NLOS condition plus the condition ratios.
/// Throws ValidationError on an empty dataset.
Summary summarize(const ScenarioDataset& ds, const LinkBudget& budget, const SummarizeOptions& opts = {});
Summary summarize(const ScenarioDataset& ds, const SummarizeOptions& opts = {});

std::string ratios_csv(std::span<const std::pair<std::string, ConditionRatios>> rows);
std::string residuals_csv(std::span<const PathLossResidual> residuals);

} // namespace idschan
