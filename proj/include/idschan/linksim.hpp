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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "idschan/link_budget.hpp"
#include "idschan/params.hpp"
#include "idschan/pathdata.hpp"

namespace idschan {

/// Thermal noise floor: -174 dBm/Hz + 10 log10(B) + NF.
double noise_floor_dbm(const LinkBudget& budget);

struct RssiEntry {
    int rx_id = 0;
    Eigen::Vector3d position_m = Eigen::Vector3d::Zero();
    Condition condition = Condition::Outage;
    double rssi_dbm = 0.0; // -inf for Outage
    double snr_db = 0.0;   // -inf for Outage
};

std::vector<RssiEntry> rssi_map(const ScenarioDataset& ds);
std::string rssi_csv(std::span<const RssiEntry> entries);

struct BerPoint {
    double ebn0_db = 0.0;
    double ber = 0.0;
    std::uint64_t n_bits = 0;
    std::uint64_t n_errors = 0;
    double ci95 = 0.0; // normal-approximation half-width
};

struct AwgnChannel {};

/// Flat fading drawn per block from a parameter column: a fresh K-factor
/// per block from Normal(mu_kf, |sigma_kf|) for LOS, Rayleigh for NLOS.
struct FadingChannel {
    ChannelParamSet params;
    Condition condition = Condition::LOS;
};

using ChannelSource = std::variant<AwgnChannel, FadingChannel>;

struct BerOptions {
    std::uint64_t bits_per_fade = 100;
    std::uint64_t bits_per_batch = 1000000; // per-batch seeds keep results schedule independent
    unsigned threads = 1;
};

/// Monte-Carlo uncoded BPSK with coherent detection (phase of h known).
/// ebn0_db may be -inf (noise only). Throws std::invalid_argument on
/// n_bits == 0 or a fading source without the requested column.
BerPoint ber_bpsk(const ChannelSource& channel, double ebn0_db, std::uint64_t n_bits, std::uint64_t rng_seed,
                  const BerOptions& opts = {});

/// Closed forms used as references.
double q_function(double x);
double ber_bpsk_awgn(double ebn0_db);
double ber_bpsk_rayleigh(double ebn0_db);

struct BerCurve {
    std::string preset;
    Condition condition = Condition::LOS;
    std::vector<BerPoint> points;
    std::vector<double> monotone_ber; // non-increasing fit of points[].ber
};

/// Eb/N0 that `first` needs at the target BER minus what `second` needs.
struct BerGap {
    std::string first;
    std::string second;
    std::optional<double> gap_db; // unavailable when the target is not bracketed
};

struct BerSweep {
    std::vector<BerCurve> curves;
    std::vector<BerGap> gaps; // every ordered pair (i < j): curves[i] vs curves[j]
    double target_ber = 1e-3;
};

/// Pool-adjacent-violators fit that makes a sequence non-increasing.
std::vector<double> monotone_nonincreasing(std::span<const double> values, std::span<const double> weights);

/// Eb/N0 at which a monotone curve crosses `target`, interpolating
/// log10(BER) linearly between grid points.
std::optional<double> ebn0_at_ber(std::span<const double> ebn0_db, std::span<const double> ber, double target);

BerSweep ber_sweep(std::span<const ChannelParamSet> presets, Condition condition, std::span<const double> ebn0_grid,
                   std::uint64_t n_bits, std::uint64_t seed, const BerOptions& opts = {}, double target_ber = 1e-3);

std::string ber_csv(const BerSweep& sweep);

} // namespace idschan
