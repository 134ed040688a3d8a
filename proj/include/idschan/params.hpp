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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idschan/pathdata.hpp"

namespace idschan {

struct MeanStd {
    double mu = 0.0;
    double sigma = 0.0;

    bool operator==(const MeanStd&) const = default;
};

struct LargeScale {
    double A_db = 0.0;
    double B = 0.0;
    double sigma_sf_db = 0.0;

    bool operator==(const LargeScale&) const = default;
};

/// One condition column of a channel parameter table.
struct ConditionParams {
    std::optional<LargeScale> large_scale;
    std::optional<MeanStd> kf_db; // LOS only
    MeanStd ds_ns;
    MeanStd asd_deg;
    MeanStd asa_deg;
    MeanStd esd_deg;
    MeanStd esa_deg;
    // When set, delay spreads follow 10^N(log10 mu, sigma_log10) instead of a
    // lognormal matched to the linear (mu, sigma) pair.
    std::optional<double> ds_sigma_log10;
    std::size_t n_records = 0;

    bool operator==(const ConditionParams&) const = default;
};

struct ChannelParamSet {
    std::string name;
    std::optional<ConditionParams> los;
    std::optional<ConditionParams> nlos;

    const std::optional<ConditionParams>& at(Condition c) const;

    bool operator==(const ChannelParamSet&) const = default;
};

/// Built-in parameter tables: BL, CV, RecV, EmV (measured cabin scenarios)
/// and 3GPP-InO (indoor office reference). Values are carried verbatim,
/// including the negative KF standard deviations and the 1e8-scaled 3GPP
/// delay-spread deviations.
const std::vector<ChannelParamSet>& builtin_param_sets();
std::optional<ChannelParamSet> find_param_set(std::string_view name);
std::vector<std::string> param_set_names();

/// Table-shaped CSV: one row per parameter, one column per (set, condition).
/// Missing entries print as n/a.
std::string param_table_csv(std::span<const ChannelParamSet> sets);

} // namespace idschan
