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

#include "idschan/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/QR>
#include <fmt/format.h>

#include "idschan/errors.hpp"
#include "idschan/parallel.hpp"
#include "idschan/stats.hpp"

namespace idschan {

namespace {

Eigen::ArrayXd linear_powers_mw(const RxRecord& r) {
    Eigen::ArrayXd p(static_cast<Eigen::Index>(r.paths.size()));
    for (std::size_t i = 0; i < r.paths.size(); ++i) p(static_cast<Eigen::Index>(i)) = stats::db_to_linear(r.paths[i].power_dbm);
    return p;
}

void require_paths(const RxRecord& r) {
    if (r.paths.empty()) throw NoPathError(fmt::format("rx_id {}: record has no paths", r.rx_id));
}

double select_angle_deg(const MultipathComponent& p, SpreadKind which) {
    switch (which) {
    case SpreadKind::ASD: return p.aod_az_deg;
    case SpreadKind::ASA: return p.aoa_az_deg;
    case SpreadKind::ESD: return p.aod_el_deg;
    case SpreadKind::ESA: return p.aoa_el_deg;
    }
    return 0.0;
}

} // namespace

double path_loss_of(const RxRecord& record, const LinkBudget& budget) {
    require_paths(record);
    const double total_mw = stats::compensated_sum(linear_powers_mw(record));
    return budget.effective_tx_dbm() - stats::linear_to_db(total_mw);
}

PathLossFit fit_path_loss(std::span<const double> distances_m, std::span<const double> path_loss_db) {
    if (distances_m.size() != path_loss_db.size()) throw FitError("distance and path-loss counts differ");
    const auto n = static_cast<Eigen::Index>(distances_m.size());
    if (n < 2) throw FitError(fmt::format("need at least 2 points, got {}", n));

    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = distances_m[static_cast<std::size_t>(i)];
        if (!(d > 0.0) || !std::isfinite(d)) throw FitError(fmt::format("distance {} must be positive", d));
        design(i, 0) = 1.0;
        design(i, 1) = 10.0 * std::log10(d);
        target(i) = path_loss_db[static_cast<std::size_t>(i)];
    }
    const double spread = design.col(1).maxCoeff() - design.col(1).minCoeff();
    if (!(spread > 1e-12)) throw FitError("all distances are equal; slope is undetermined");

    const auto qr = design.colPivHouseholderQr();
    if (qr.rank() < 2) throw FitError("singular path-loss design");
    const Eigen::Vector2d coef = qr.solve(target);
    const Eigen::ArrayXd residual = (target - design * coef).array();

    PathLossFit fit;
    fit.A_db = coef(0);
    fit.B = coef(1);
    fit.n_points = static_cast<std::size_t>(n);
    fit.sigma_sf_db = stats::sample_moments(residual).std_dev;
    return fit;
}

PathLossFit fit_path_loss(const ScenarioDataset& ds, Condition condition) {
    std::vector<double> d;
    std::vector<double> pl;
    for (const auto& r : ds.records) {
        if (r.condition != condition || r.paths.empty()) continue;
        d.push_back(r.distance_3d_m);
        pl.push_back(path_loss_of(r, ds.link_budget));
    }
    auto fit = fit_path_loss(d, pl);
    fit.condition = condition;
    return fit;
}

std::optional<double> k_factor(const RxRecord& record, KfReference ref) {
    if (record.paths.empty()) return std::nullopt;
    std::size_t reference = record.paths.size();
    if (ref == KfReference::DirectPath) {
        const auto it = std::find_if(record.paths.begin(), record.paths.end(),
                                     [](const MultipathComponent& p) { return p.is_direct(); });
        if (it == record.paths.end()) return std::nullopt;
        reference = static_cast<std::size_t>(it - record.paths.begin());
    } else {
        const auto it = std::max_element(record.paths.begin(), record.paths.end(),
                                         [](const auto& a, const auto& b) { return a.power_dbm < b.power_dbm; });
        reference = static_cast<std::size_t>(it - record.paths.begin());
    }
    if (record.paths.size() == 1) return std::numeric_limits<double>::infinity();

    const Eigen::ArrayXd p = linear_powers_mw(record);
    stats::CompensatedSum<double> others;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (static_cast<std::size_t>(i) != reference) others.add(p(i));
    return stats::linear_to_db(p(static_cast<Eigen::Index>(reference)) / others.value());
}

double rms_delay_spread(const RxRecord& record) {
    require_paths(record);
    Eigen::ArrayXd tau(static_cast<Eigen::Index>(record.paths.size()));
    for (std::size_t i = 0; i < record.paths.size(); ++i) tau(static_cast<Eigen::Index>(i)) = record.paths[i].delay_ns;
    return stats::rms_delay_spread(tau, linear_powers_mw(record));
}

std::string_view to_string(SpreadKind k) noexcept {
    switch (k) {
    case SpreadKind::ASD: return "ASD";
    case SpreadKind::ASA: return "ASA";
    case SpreadKind::ESD: return "ESD";
    case SpreadKind::ESA: return "ESA";
    }
    return "?";
}

double angular_spread(const RxRecord& record, SpreadKind which) {
    require_paths(record);
    constexpr double deg = std::numbers::pi / 180.0;
    Eigen::ArrayXd theta(static_cast<Eigen::Index>(record.paths.size()));
    for (std::size_t i = 0; i < record.paths.size(); ++i)
        theta(static_cast<Eigen::Index>(i)) = select_angle_deg(record.paths[i], which) * deg;
    return stats::angular_spread_rad(theta, linear_powers_mw(record)) / deg;
}

ConditionRatios condition_ratios(const ScenarioDataset& ds) {
    ConditionRatios out;
    out.total = ds.records.size();
    for (const auto& r : ds.records) ++out.count[static_cast<std::size_t>(r.condition)];
    if (out.total > 0)
        for (std::size_t c = 0; c < 4; ++c) out.ratio[c] = static_cast<double>(out.count[c]) / static_cast<double>(out.total);
    return out;
}

namespace {

struct RecordStats {
    std::optional<double> kf;
    double ds = 0.0;
    std::array<double, 4> spreads{};
};

MeanStd moments_of(const std::vector<double>& v) {
    const auto m = stats::sample_moments(Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    return {m.mean, m.std_dev};
}

} // namespace

Summary summarize(const ScenarioDataset& ds, const LinkBudget& budget, const SummarizeOptions& opts) {
    if (ds.records.empty()) throw ValidationError("cannot summarize an empty dataset");
    Summary out;
    out.params.name = ds.scenario_name;
    out.ratios = condition_ratios(ds);

    std::vector<RecordStats> per(ds.records.size());
    parallel_for(ds.records.size(), opts.threads, [&](std::size_t i) {
        const auto& r = ds.records[i];
        if (r.paths.empty()) return;
        per[i].kf = k_factor(r, opts.kf_reference);
        per[i].ds = rms_delay_spread(r);
        for (std::size_t k = 0; k < 4; ++k) per[i].spreads[k] = angular_spread(r, kAllSpreads[k]);
    });

    for (Condition cond : {Condition::LOS, Condition::NLOS}) {
        std::vector<double> dist, pl, kf, dsv;
        std::array<std::vector<double>, 4> spreads;
        std::vector<int> ids;
        for (std::size_t i = 0; i < ds.records.size(); ++i) {
            const auto& r = ds.records[i];
            if (r.condition != cond) continue;
            ids.push_back(r.rx_id);
            dist.push_back(r.distance_3d_m);
            pl.push_back(path_loss_of(r, budget));
            dsv.push_back(per[i].ds);
            for (std::size_t k = 0; k < 4; ++k) spreads[k].push_back(per[i].spreads[k]);
            if (cond == Condition::LOS && per[i].kf) {
                if (std::isfinite(*per[i].kf)) kf.push_back(*per[i].kf);
                else ++out.infinite_kf_records;
            }
        }
        if (ids.empty()) continue;

        ConditionParams p;
        p.n_records = ids.size();
        try {
            auto fit = fit_path_loss(dist, pl);
            fit.condition = cond;
            p.large_scale = LargeScale{fit.A_db, fit.B, fit.sigma_sf_db};
            for (std::size_t i = 0; i < ids.size(); ++i) {
                const double fitted = fit.A_db + fit.B * 10.0 * std::log10(dist[i]);
                out.residuals.push_back({ids[i], cond, dist[i], pl[i], fitted, pl[i] - fitted});
            }
            (cond == Condition::LOS ? out.los_fit : out.nlos_fit) = fit;
        } catch (const FitError&) {
            // too few distinct distances; large-scale block stays absent
        }
        if (cond == Condition::LOS && !kf.empty()) p.kf_db = moments_of(kf);
        p.ds_ns = moments_of(dsv);
        p.asd_deg = moments_of(spreads[0]);
        p.asa_deg = moments_of(spreads[1]);
        p.esd_deg = moments_of(spreads[2]);
        p.esa_deg = moments_of(spreads[3]);
        (cond == Condition::LOS ? out.params.los : out.params.nlos) = std::move(p);
    }
    return out;
}

Summary summarize(const ScenarioDataset& ds, const SummarizeOptions& opts) {
    return summarize(ds, ds.link_budget, opts);
}

std::string ratios_csv(std::span<const std::pair<std::string, ConditionRatios>> rows) {
    std::string out = "scenario,LOS,NLOS,DS,Outage,n_records\n";
    for (const auto& [name, r] : rows)
        out += fmt::format("{},{},{},{},{},{}\n", name, r.ratio[0], r.ratio[1], r.ratio[2], r.ratio[3], r.total);
    return out;
}

std::string residuals_csv(std::span<const PathLossResidual> residuals) {
    std::string out = "rx_id,condition,distance_3d_m,path_loss_db,fitted_db,residual_db\n";
    for (const auto& r : residuals)
        out += fmt::format("{},{},{},{},{},{}\n", r.rx_id, to_string(r.condition), r.distance_3d_m, r.path_loss_db,
                           r.fitted_db, r.residual_db);
    return out;
}

} // namespace idschan
