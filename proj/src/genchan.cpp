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

#include "idschan/genchan.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "idschan/link_budget.hpp"
#include "idschan/stats.hpp"

namespace idschan {

Eigen::ArrayXd ChannelRealization::delays_ns() const {
    Eigen::ArrayXd d(static_cast<Eigen::Index>(taps.size()));
    for (std::size_t i = 0; i < taps.size(); ++i) d(static_cast<Eigen::Index>(i)) = taps[i].delay_ns;
    return d;
}

Eigen::ArrayXd ChannelRealization::powers() const {
    Eigen::ArrayXd p(static_cast<Eigen::Index>(taps.size()));
    for (std::size_t i = 0; i < taps.size(); ++i) p(static_cast<Eigen::Index>(i)) = taps[i].power_lin;
    return p;
}

double LogNormal::mean() const { return std::exp(mu_ln + 0.5 * sigma_ln * sigma_ln); }

double LogNormal::std_dev() const {
    const double s2 = sigma_ln * sigma_ln;
    return std::sqrt(std::expm1(s2)) * mean();
}

LogNormal delay_spread_distribution(const ConditionParams& p) {
    const double mu = p.ds_ns.mu;
    if (p.ds_sigma_log10) {
        // median mu, log10 deviation sigma_lg
        return {std::log(mu), *p.ds_sigma_log10 * std::numbers::ln10};
    }
    const double ratio = p.ds_ns.sigma / mu;
    const double s2 = std::log1p(ratio * ratio);
    return {std::log(mu) - 0.5 * s2, std::sqrt(s2)};
}

double wrap_azimuth_deg(double az) {
    double r = std::fmod(az + 180.0, 360.0);
    if (r < 0.0) r += 360.0;
    r -= 180.0; // [-180, 180)
    return r <= -180.0 ? r + 360.0 : r;
}

double fold_elevation_deg(double el) {
    // Reflect at +-90: the map is periodic with period 360.
    double r = std::fmod(el + 90.0, 360.0);
    if (r < 0.0) r += 360.0;
    return r <= 180.0 ? r - 90.0 : 270.0 - r;
}

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(fmt::format("draw_realization: {} is not finite", what));
}

} // namespace

ChannelRealization draw_realization(const ChannelParamSet& params, Condition condition, int n_taps,
                                    std::uint64_t rng_seed) {
    if (n_taps < 2) throw std::invalid_argument("draw_realization: n_taps must be >= 2");
    if (condition != Condition::LOS && condition != Condition::NLOS)
        throw std::invalid_argument("draw_realization: condition must be LOS or NLOS");
    const auto& column_opt = params.at(condition);
    if (!column_opt)
        throw std::invalid_argument(fmt::format("draw_realization: '{}' has no {} column", params.name,
                                                to_string(condition)));
    const ConditionParams& col = *column_opt;
    const bool los = condition == Condition::LOS;

    require_finite(col.ds_ns.mu, "mu_ds");
    require_finite(col.ds_ns.sigma, "sigma_ds");
    if (!(col.ds_ns.mu >= 0.0) || col.ds_ns.sigma < 0.0)
        throw std::invalid_argument("draw_realization: delay-spread moments must be non-negative");
    for (double v : {col.asd_deg.mu, col.asa_deg.mu, col.esd_deg.mu, col.esa_deg.mu}) require_finite(v, "angular spread");
    if (los && !col.kf_db) throw std::invalid_argument("draw_realization: LOS column has no K-factor");
    if (los) {
        require_finite(col.kf_db->mu, "mu_kf");
        require_finite(col.kf_db->sigma, "sigma_kf");
    }
    const double sigma_sf = col.large_scale ? col.large_scale->sigma_sf_db : 0.0;
    require_finite(sigma_sf, "sigma_sf");

    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::exponential_distribution<double> exponential(1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    ChannelRealization out;
    out.condition = condition;
    out.seed_used = rng_seed;

    // (1) large-scale and dispersion draws
    double target;
    {
        const double z = normal(rng);
        const bool degenerate = col.ds_sigma_log10 ? *col.ds_sigma_log10 == 0.0 : col.ds_ns.sigma == 0.0;
        if (degenerate || col.ds_ns.mu == 0.0) {
            target = col.ds_ns.mu;
        } else {
            const auto ln = delay_spread_distribution(col);
            target = std::exp(ln.mu_ln + ln.sigma_ln * z);
        }
    }
    out.target_ds_ns = target;
    if (los) out.kf_db = col.kf_db->mu + std::abs(col.kf_db->sigma) * normal(rng);
    out.sf_db = sigma_sf * normal(rng);

    // (2) excess delays
    const auto n = static_cast<std::size_t>(n_taps);
    std::vector<double> delays(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) delays[i] = exponential(rng) * target;
    std::sort(delays.begin() + 1, delays.end());

    // (3) exponential power profile, (4) K-factor split
    Eigen::ArrayXd tau = Eigen::Map<Eigen::ArrayXd>(delays.data(), n_taps);
    Eigen::ArrayXd power = target > 0.0 ? Eigen::ArrayXd((-tau / target).exp()) : Eigen::ArrayXd::Ones(n_taps);
    if (los) {
        const double k = std::pow(10.0, *out.kf_db / 10.0);
        const double rest = power.tail(n_taps - 1).sum();
        power.tail(n_taps - 1) *= (1.0 / (k + 1.0)) / rest;
        power(0) = k / (k + 1.0);
    } else {
        power /= power.sum();
    }

    // (5) exact delay-spread rescale
    if (target == 0.0) {
        tau.setZero();
    } else {
        const double current = stats::rms_delay_spread(tau, power);
        if (!(current > 0.0) || !std::isfinite(current))
            throw std::invalid_argument("draw_realization: degenerate delay profile");
        tau *= target / current;
    }

    // (6) angles
    const double az_mean_d = wrap_azimuth_deg(360.0 * uniform(rng) - 180.0);
    const double az_mean_a = wrap_azimuth_deg(360.0 * uniform(rng) - 180.0);
    const double el_mean_d = 180.0 * uniform(rng) - 90.0;
    const double el_mean_a = 180.0 * uniform(rng) - 90.0;

    out.taps.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& t = out.taps[i];
        t.delay_ns = tau(static_cast<Eigen::Index>(i));
        t.power_lin = power(static_cast<Eigen::Index>(i));
        t.aod_az_deg = wrap_azimuth_deg(az_mean_d + col.asd_deg.mu * normal(rng));
        t.aoa_az_deg = wrap_azimuth_deg(az_mean_a + col.asa_deg.mu * normal(rng));
        t.aod_el_deg = fold_elevation_deg(el_mean_d + col.esd_deg.mu * normal(rng));
        t.aoa_el_deg = fold_elevation_deg(el_mean_a + col.esa_deg.mu * normal(rng));
    }
    return out;
}

std::complex<double> narrowband_gain(const ChannelRealization& real, std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    return rician_gain(real.condition == Condition::LOS ? real.kf_db : std::nullopt, rng);
}

RxRecord realization_to_record(const ChannelRealization& real, const ConditionParams& column, int rx_id,
                               const RealizationRecordOptions& opts) {
    if (!(opts.distance_m > 0.0)) throw std::invalid_argument("realization_to_record: distance must be positive");
    RxRecord rec;
    rec.rx_id = rx_id;
    rec.position_m = opts.tx_position_m + opts.distance_m * opts.direction.normalized();
    rec.distance_3d_m = opts.distance_m;

    const LargeScale ls = column.large_scale.value_or(LargeScale{});
    const double path_loss = ls.A_db + 10.0 * ls.B * std::log10(opts.distance_m) + real.sf_db;
    const double flight_ns = opts.distance_m / kSpeedOfLight * 1e9;
    for (std::size_t i = 0; i < real.taps.size(); ++i) {
        const auto& t = real.taps[i];
        MultipathComponent p;
        p.power_dbm = opts.effective_tx_dbm - path_loss + stats::linear_to_db(t.power_lin);
        p.delay_ns = flight_ns + t.delay_ns;
        p.aod_az_deg = t.aod_az_deg;
        p.aod_el_deg = t.aod_el_deg;
        p.aoa_az_deg = t.aoa_az_deg;
        p.aoa_el_deg = t.aoa_el_deg;
        const bool direct = i == 0 && real.condition == Condition::LOS;
        p.interactions = {direct ? Interaction::Direct : Interaction::Reflect};
        rec.paths.push_back(std::move(p));
    }
    rec.condition = classify(rec.paths);
    return rec;
}

} // namespace idschan
