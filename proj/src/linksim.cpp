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

#include "idschan/linksim.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "idschan/genchan.hpp"
#include "idschan/parallel.hpp"
#include "idschan/stats.hpp"

namespace idschan {

double noise_floor_dbm(const LinkBudget& budget) {
    return -174.0 + 10.0 * std::log10(budget.bandwidth_hz) + budget.noise_figure_db;
}

std::vector<RssiEntry> rssi_map(const ScenarioDataset& ds) {
    const double floor_dbm = noise_floor_dbm(ds.link_budget);
    std::vector<RssiEntry> out;
    out.reserve(ds.records.size());
    for (const auto& r : ds.records) {
        RssiEntry e;
        e.rx_id = r.rx_id;
        e.position_m = r.position_m;
        e.condition = r.condition;
        if (r.paths.empty()) {
            e.rssi_dbm = -std::numeric_limits<double>::infinity();
            e.snr_db = e.rssi_dbm;
        } else {
            stats::CompensatedSum<double> total;
            for (const auto& p : r.paths) total.add(stats::db_to_linear(p.power_dbm));
            e.rssi_dbm = stats::linear_to_db(total.value());
            e.snr_db = e.rssi_dbm - floor_dbm;
        }
        out.push_back(e);
    }
    return out;
}

namespace {

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "INF" : "-INF";
    return fmt::format("{}", v);
}

} // namespace

std::string rssi_csv(std::span<const RssiEntry> entries) {
    std::string out = "rx_id,x,y,z,condition,rssi_dbm,snr_db\n";
    for (const auto& e : entries)
        out += fmt::format("{},{},{},{},{},{},{}\n", e.rx_id, num(e.position_m.x()), num(e.position_m.y()),
                           num(e.position_m.z()), to_string(e.condition), num(e.rssi_dbm), num(e.snr_db));
    return out;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double ber_bpsk_awgn(double ebn0_db) { return q_function(std::sqrt(2.0 * stats::db_to_linear(ebn0_db))); }

double ber_bpsk_rayleigh(double ebn0_db) {
    const double g = stats::db_to_linear(ebn0_db);
    return 0.5 * (1.0 - std::sqrt(g / (1.0 + g)));
}

BerPoint ber_bpsk(const ChannelSource& channel, double ebn0_db, std::uint64_t n_bits, std::uint64_t rng_seed,
                  const BerOptions& opts) {
    if (n_bits == 0) throw std::invalid_argument("ber_bpsk: n_bits must be >= 1");
    if (opts.bits_per_fade == 0 || opts.bits_per_batch == 0)
        throw std::invalid_argument("ber_bpsk: block and batch lengths must be >= 1");

    const FadingChannel* fading = std::get_if<FadingChannel>(&channel);
    std::optional<MeanStd> kf;
    if (fading) {
        if (fading->condition != Condition::LOS && fading->condition != Condition::NLOS)
            throw std::invalid_argument("ber_bpsk: fading condition must be LOS or NLOS");
        const auto& col = fading->params.at(fading->condition);
        if (!col)
            throw std::invalid_argument(fmt::format("ber_bpsk: '{}' has no {} column", fading->params.name,
                                                    to_string(fading->condition)));
        if (fading->condition == Condition::LOS) {
            if (!col->kf_db) throw std::invalid_argument("ber_bpsk: LOS column has no K-factor");
            kf = col->kf_db;
        }
    }

    // Eb/N0 with N0 = 1: amplitude sqrt(Eb), noise variance 1/2 per dimension.
    const double amplitude = std::isinf(ebn0_db) && ebn0_db < 0 ? 0.0 : std::sqrt(stats::db_to_linear(ebn0_db));
    const std::uint64_t n_batches = (n_bits + opts.bits_per_batch - 1) / opts.bits_per_batch;
    std::vector<std::uint64_t> errors(n_batches, 0);

    parallel_for(n_batches, opts.threads, [&](std::size_t b) {
        std::mt19937_64 rng(mix_seed(rng_seed, b));
        std::normal_distribution<double> noise(0.0, std::sqrt(0.5));
        std::normal_distribution<double> standard(0.0, 1.0);
        const std::uint64_t begin = b * opts.bits_per_batch;
        const std::uint64_t count = std::min(opts.bits_per_batch, n_bits - begin);
        std::uint64_t errs = 0;
        std::complex<double> h{1.0, 0.0};
        for (std::uint64_t i = 0; i < count; ++i) {
            if (fading && i % opts.bits_per_fade == 0) {
                std::optional<double> k;
                if (kf) k = kf->mu + std::abs(kf->sigma) * standard(rng);
                h = rician_gain(k, rng);
            }
            const double s = (rng() & 1u) ? 1.0 : -1.0;
            const std::complex<double> n(noise(rng), noise(rng));
            const std::complex<double> y = h * (amplitude * s) + n;
            const double z = std::real(std::conj(h) * y);
            const double decided = z >= 0.0 ? 1.0 : -1.0;
            if (decided != s) ++errs;
        }
        errors[b] = errs;
    });

    BerPoint pt;
    pt.ebn0_db = ebn0_db;
    pt.n_bits = n_bits;
    for (auto e : errors) pt.n_errors += e;
    pt.ber = static_cast<double>(pt.n_errors) / static_cast<double>(n_bits);
    pt.ci95 = 1.96 * std::sqrt(pt.ber * (1.0 - pt.ber) / static_cast<double>(n_bits));
    return pt;
}

std::vector<double> monotone_nonincreasing(std::span<const double> values, std::span<const double> weights) {
    struct Block {
        double mean;
        double weight;
        std::size_t size;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        blocks.push_back({values[i], w, 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean < blocks.back().mean) {
            const Block top = blocks.back();
            blocks.pop_back();
            Block& prev = blocks.back();
            const double wsum = prev.weight + top.weight;
            prev.mean = (prev.mean * prev.weight + top.mean * top.weight) / wsum;
            prev.weight = wsum;
            prev.size += top.size;
        }
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& b : blocks) out.insert(out.end(), b.size, b.mean);
    return out;
}

std::optional<double> ebn0_at_ber(std::span<const double> ebn0_db, std::span<const double> ber, double target) {
    for (std::size_t j = 1; j < ber.size(); ++j) {
        const double hi = ber[j - 1];
        const double lo = ber[j];
        if (!(hi >= target && lo <= target) || hi == lo) continue;
        double frac;
        if (lo > 0.0) frac = (std::log10(hi) - std::log10(target)) / (std::log10(hi) - std::log10(lo));
        else frac = (hi - target) / (hi - lo);
        return ebn0_db[j - 1] + frac * (ebn0_db[j] - ebn0_db[j - 1]);
    }
    if (!ber.empty() && ber.front() == target) return ebn0_db.front();
    return std::nullopt;
}

BerSweep ber_sweep(std::span<const ChannelParamSet> presets, Condition condition, std::span<const double> ebn0_grid,
                   std::uint64_t n_bits, std::uint64_t seed, const BerOptions& opts, double target_ber) {
    if (ebn0_grid.empty()) throw std::invalid_argument("ber_sweep: empty Eb/N0 grid");
    BerSweep sweep;
    sweep.target_ber = target_ber;
    std::vector<std::optional<double>> required;
    for (const auto& preset : presets) {
        BerCurve curve;
        curve.preset = preset.name;
        curve.condition = condition;
        std::vector<double> ber, weight;
        for (std::size_t j = 0; j < ebn0_grid.size(); ++j) {
            const auto pt =
                ber_bpsk(FadingChannel{preset, condition}, ebn0_grid[j], n_bits, mix_seed(seed, j), opts);
            curve.points.push_back(pt);
            ber.push_back(pt.ber);
            weight.push_back(static_cast<double>(pt.n_bits));
        }
        curve.monotone_ber = monotone_nonincreasing(ber, weight);
        required.push_back(ebn0_at_ber(ebn0_grid, curve.monotone_ber, target_ber));
        sweep.curves.push_back(std::move(curve));
    }
    for (std::size_t i = 0; i < sweep.curves.size(); ++i) {
        for (std::size_t j = i + 1; j < sweep.curves.size(); ++j) {
            BerGap gap{sweep.curves[i].preset, sweep.curves[j].preset, std::nullopt};
            if (required[i] && required[j]) gap.gap_db = *required[i] - *required[j];
            sweep.gaps.push_back(gap);
        }
    }
    return sweep;
}

std::string ber_csv(const BerSweep& sweep) {
    std::string out = "preset,condition,ebn0_db,ber,ci95,n_bits\n";
    for (const auto& c : sweep.curves)
        for (const auto& p : c.points)
            out += fmt::format("{},{},{},{},{},{}\n", c.preset, to_string(c.condition), num(p.ebn0_db), p.ber, p.ci95,
                               p.n_bits);
    return out;
}

} // namespace idschan
