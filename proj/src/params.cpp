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

#include "idschan/params.hpp"

#include <cmath>
#include <functional>

#include <fmt/format.h>

namespace idschan {

const std::optional<ConditionParams>& ChannelParamSet::at(Condition c) const {
    static const std::optional<ConditionParams> none;
    switch (c) {
    case Condition::LOS: return los;
    case Condition::NLOS: return nlos;
    default: return none;
    }
}

namespace {

struct Column {
    LargeScale ls;
    std::optional<MeanStd> kf;
    MeanStd ds, asd, asa, esd, esa;
};

ConditionParams make(const Column& c, std::optional<double> ds_sigma_log10 = std::nullopt) {
    ConditionParams p;
    p.large_scale = c.ls;
    p.kf_db = c.kf;
    p.ds_ns = c.ds;
    p.asd_deg = c.asd;
    p.asa_deg = c.asa;
    p.esd_deg = c.esd;
    p.esa_deg = c.esa;
    p.ds_sigma_log10 = ds_sigma_log10;
    return p;
}

std::vector<ChannelParamSet> build_tables() {
    std::vector<ChannelParamSet> sets;
    const auto add = [&](std::string name, ConditionParams los, ConditionParams nlos) {
        sets.push_back({std::move(name), std::move(los), std::move(nlos)});
    };
    // clang-format off
    add("BL",
        make({{58.49, 1.45, 5.58}, MeanStd{-4.51, -8.11}, {5.60, 2.35}, {39.02, 15.35}, {39.25, 15.10}, {31.66, 39.97}, {50.18, 25.40}}),
        make({{59.00, 3.62, 7.76}, std::nullopt,          {3.82, 2.45}, {15.88, 10.51}, {19.18, 11.02}, {16.34, 12.39}, {72.83, 26.63}}));
    add("CV",
        make({{61.72, 1.91, 4.55}, MeanStd{4.3, 2.32},    {2.58, 1.46}, {18.12, 12.63}, {15.36, 10.11}, {22.87, 25.33}, {35.36, 18.65}}),
        make({{64.90, 4.00, 7.22}, std::nullopt,          {2.60, 1.83}, {6.32, 6.19},   {14.25, 7.49},  {11.33, 6.76},  {70.33, 28.51}}));
    add("RecV",
        make({{60.37, 1.66, 5.80}, MeanStd{-1.98, -4.69}, {11.82, 5.56}, {11.87, 7.02}, {29.80, 17.19}, {70.24, 30.21}, {61.72, 19.44}}),
        make({{62.52, 3.64, 6.84}, std::nullopt,          {5.68, 3.22},  {3.80, 3.61},  {14.35, 8.23},  {30.31, 18.03}, {70.68, 28.15}}));
    add("EmV",
        make({{59.00, 1.41, 5.64}, MeanStd{-4.81, -8.07}, {5.92, 2.50}, {38.67, 15.12}, {41.66, 9.81},  {31.48, 39.23}, {52.01, 25.55}}),
        make({{59.28, 3.94, 9.38}, std::nullopt,          {4.70, 3.22}, {15.30, 10.96}, {13.61, 13.60}, {17.51, 14.18}, {70.18, 28.36}}));
    // The indoor-office deviations are multiplicative factors 10^sigma_lg.
    add("3GPP-InO",
        make({{61.34, 1.73, 3.0},  MeanStd{7.0, 4.0},     {19.65, 1.51e8}, {39.81, 1.51}, {31.85, 1.97}, {1.37, 3.09},  {11.47, 1.60}},
             std::log10(1.51)),
        make({{53.33, 3.83, 8.03}, std::nullopt,          {26.15, 1.58e8}, {41.68, 1.72}, {50.36, 1.71}, {12.02, 2.29}, {14.71, 4.11}},
             std::log10(1.58)));
    // clang-format on
    return sets;
}

std::string fmt_value(std::optional<double> v) { return v ? fmt::format("{}", *v) : std::string("n/a"); }

} // namespace

const std::vector<ChannelParamSet>& builtin_param_sets() {
    static const std::vector<ChannelParamSet> sets = build_tables();
    return sets;
}

std::optional<ChannelParamSet> find_param_set(std::string_view name) {
    for (const auto& s : builtin_param_sets())
        if (s.name == name) return s;
    if (name == "C-V") return find_param_set("CV");
    if (name == "Rec-V") return find_param_set("RecV");
    if (name == "Em-V") return find_param_set("EmV");
    return std::nullopt;
}

std::vector<std::string> param_set_names() {
    std::vector<std::string> out;
    for (const auto& s : builtin_param_sets()) out.push_back(s.name);
    return out;
}

std::string param_table_csv(std::span<const ChannelParamSet> sets) {
    using Getter = std::function<std::optional<double>(const ConditionParams&)>;
    const auto ls = [](double LargeScale::*f) -> Getter {
        return [f](const ConditionParams& p) -> std::optional<double> {
            if (!p.large_scale) return std::nullopt;
            return (*p.large_scale).*f;
        };
    };
    const auto ms = [](MeanStd ConditionParams::*field, double MeanStd::*f) -> Getter {
        return [field, f](const ConditionParams& p) -> std::optional<double> { return (p.*field).*f; };
    };
    const auto kf = [](double MeanStd::*f) -> Getter {
        return [f](const ConditionParams& p) -> std::optional<double> {
            if (!p.kf_db) return std::nullopt;
            return (*p.kf_db).*f;
        };
    };
    const std::vector<std::pair<std::string, Getter>> rows = {
        {"A_db", ls(&LargeScale::A_db)},
        {"B", ls(&LargeScale::B)},
        {"sigma_sf_db", ls(&LargeScale::sigma_sf_db)},
        {"mu_kf_db", kf(&MeanStd::mu)},
        {"sigma_kf_db", kf(&MeanStd::sigma)},
        {"mu_ds_ns", ms(&ConditionParams::ds_ns, &MeanStd::mu)},
        {"sigma_ds_ns", ms(&ConditionParams::ds_ns, &MeanStd::sigma)},
        {"mu_asd_deg", ms(&ConditionParams::asd_deg, &MeanStd::mu)},
        {"sigma_asd_deg", ms(&ConditionParams::asd_deg, &MeanStd::sigma)},
        {"mu_asa_deg", ms(&ConditionParams::asa_deg, &MeanStd::mu)},
        {"sigma_asa_deg", ms(&ConditionParams::asa_deg, &MeanStd::sigma)},
        {"mu_esd_deg", ms(&ConditionParams::esd_deg, &MeanStd::mu)},
        {"sigma_esd_deg", ms(&ConditionParams::esd_deg, &MeanStd::sigma)},
        {"mu_esa_deg", ms(&ConditionParams::esa_deg, &MeanStd::mu)},
        {"sigma_esa_deg", ms(&ConditionParams::esa_deg, &MeanStd::sigma)},
    };

    std::string out = "parameter";
    for (const auto& s : sets)
        for (auto c : {Condition::LOS, Condition::NLOS}) out += fmt::format(",{}/{}", s.name, to_string(c));
    out += '\n';
    for (const auto& [label, get] : rows) {
        out += label;
        for (const auto& s : sets) {
            for (auto c : {Condition::LOS, Condition::NLOS}) {
                const auto& p = s.at(c);
                out += ',';
                out += p ? fmt_value(get(*p)) : std::string("n/a");
            }
        }
        out += '\n';
    }
    return out;
}

} // namespace idschan
