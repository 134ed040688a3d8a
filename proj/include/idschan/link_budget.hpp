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

namespace idschan {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

// Transmitter/receiver configuration shared by the tracer, the dataset
// sidecar and the link-level evaluation. Defaults are the 28 GHz cabin
// setup: 20 dBm, isotropic antennas, 10 dB NF over 1 GHz.
struct LinkBudget {
    double tx_power_dbm = 20.0;
    double gain_tx_dbi = 0.0;
    double gain_rx_dbi = 0.0;
    double noise_figure_db = 10.0;
    double bandwidth_hz = 1e9;
    double carrier_hz = 28e9;
    double line_loss_db = 0.0;
    double sensitivity_dbm = -120.0;

    // Transmit EIRP plus receive gain, less feeder loss.
    double effective_tx_dbm() const noexcept {
        return tx_power_dbm + gain_tx_dbi + gain_rx_dbi - line_loss_db;
    }

    bool operator==(const LinkBudget&) const = default;
};

// Throws ValidationError when bandwidth or carrier is not positive.
void validate(const LinkBudget& budget);

} // namespace idschan
