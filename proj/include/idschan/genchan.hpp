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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "idschan/params.hpp"
#include "idschan/pathdata.hpp"

namespace idschan {

struct Tap {
    double delay_ns = 0.0;
    double power_lin = 0.0;
    double aod_az_deg = 0.0;
    double aoa_az_deg = 0.0;
    double aod_el_deg = 0.0;
    double aoa_el_deg = 0.0;
};

/// One tapped multipath profile. Powers sum to one; the first tap sits at
/// zero excess delay and, for LOS, carries the K-factor share of the power.
struct ChannelRealization {
    Condition condition = Condition::LOS;
    std::vector<Tap> taps;
    std::optional<double> kf_db; // LOS only
    double sf_db = 0.0;
    double target_ds_ns = 0.0;
    std::uint64_t seed_used = 0;

    Eigen::ArrayXd delays_ns() const;
    Eigen::ArrayXd powers() const;
};

inline constexpr int kDefaultTaps = 20;

/// Lognormal parameters (of ln DS) for the delay-spread distribution of a
/// parameter column: linear-moment matched, or log10-domain when the column
/// carries ds_sigma_log10.
struct LogNormal {
    double mu_ln = 0.0;
    double sigma_ln = 0.0;

    double mean() const;
    double std_dev() const;
};
LogNormal delay_spread_distribution(const ConditionParams& p);

/// Draws a realization: delay spread, K-factor (LOS) and shadow fade from the
/// column's distributions; exponential excess delays with an exponential
/// power profile; exact K-factor and delay-spread rescaling; wrapped-Gaussian
/// tap angles about a uniformly drawn mean with the mean spread as deviation.
/// Negative KF deviations are used by magnitude. Deterministic in rng_seed.
/// Throws std::invalid_argument on n_taps < 2, an absent condition, or a
/// non-finite parameter.
ChannelRealization draw_realization(const ChannelParamSet& params, Condition condition, int n_taps,
                                    std::uint64_t rng_seed);

/// Flat-fading gain with E|h|^2 = 1: Rician with the realization's K for LOS,
/// Rayleigh for NLOS.
std::complex<double> narrowband_gain(const ChannelRealization& real, std::uint64_t rng_seed);

/// Same model for a bare K-factor (nullopt = Rayleigh), drawing from rng.
/// Always consumes one uniform phase and two normals.
template <typename Rng>
std::complex<double> rician_gain(std::optional<double> kf_db, Rng& rng) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double phi = phase(rng);
    const double re = normal(rng);
    const double im = normal(rng);
    const std::complex<double> scatter(re, im);
    if (!kf_db) return scatter;
    const double k = std::pow(10.0, *kf_db / 10.0);
    const std::complex<double> specular = std::polar(1.0, phi);
    if (std::isinf(k)) return specular;
    return std::sqrt(k / (k + 1.0)) * specular + std::sqrt(1.0 / (k + 1.0)) * scatter;
}

/// Wraps to (-180, 180].
double wrap_azimuth_deg(double az);
/// Folds into [-90, 90] by reflection at the poles.
double fold_elevation_deg(double el);

struct RealizationRecordOptions {
    double distance_m = 5.0;
    Eigen::Vector3d tx_position_m = Eigen::Vector3d::Zero();
    Eigen::Vector3d direction = Eigen::Vector3d::UnitX();
    double effective_tx_dbm = 20.0;
};

/// Expresses a realization as a receiver record: powers are placed on the
/// column's A-B line at the given distance (plus the drawn shadow fade), and
/// delays are offset by the line-of-flight time. Tap 0 of a LOS realization
/// is tagged Direct, every other tap Reflect.
RxRecord realization_to_record(const ChannelRealization& real, const ConditionParams& column, int rx_id,
                               const RealizationRecordOptions& opts);

} // namespace idschan
