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

// Power-weighted dispersion kernels over Eigen arrays. Powers are linear
// (any common unit); delays and angles are in whatever unit the caller uses,
// except the angular kernel which works in radians.

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace idschan::stats {

/// Neumaier-compensated running sum.
template <typename Scalar>
class CompensatedSum {
public:
    void add(Scalar x) noexcept {
        const Scalar t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
        else comp_ += (x - t) + sum_;
        sum_ = t;
    }
    Scalar value() const noexcept { return sum_ + comp_; }

private:
    Scalar sum_{0};
    Scalar comp_{0};
};

template <typename Derived>
typename Derived::Scalar compensated_sum(const Eigen::ArrayBase<Derived>& x) {
    CompensatedSum<typename Derived::Scalar> acc;
    for (Eigen::Index i = 0; i < x.size(); ++i) acc.add(x(i));
    return acc.value();
}

template <typename Scalar>
Scalar db_to_linear(Scalar db) {
    return std::pow(Scalar(10), db / Scalar(10));
}

template <typename Scalar>
Scalar linear_to_db(Scalar lin) {
    return Scalar(10) * std::log10(lin);
}

/// Power-weighted mean of `values`.
template <typename DerivedV, typename DerivedP>
typename DerivedV::Scalar weighted_mean(const Eigen::ArrayBase<DerivedV>& values,
                                        const Eigen::ArrayBase<DerivedP>& powers) {
    return (values * powers).sum() / powers.sum();
}

/// RMS delay spread: square root of the power-weighted second central moment
/// of the delay profile.
template <typename DerivedT, typename DerivedP>
typename DerivedT::Scalar rms_delay_spread(const Eigen::ArrayBase<DerivedT>& delays,
                                           const Eigen::ArrayBase<DerivedP>& powers) {
    using Scalar = typename DerivedT::Scalar;
    const Scalar total = powers.sum();
    const Scalar mean = (delays * powers).sum() / total;
    const Scalar var = ((delays - mean).square() * powers).sum() / total;
    return std::sqrt(std::max(var, Scalar(0)));
}

/// mod(x, 2 pi) in [0, 2 pi).
template <typename Scalar>
Scalar mod_two_pi(Scalar x) {
    constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    Scalar r = std::fmod(x, two_pi);
    if (r < Scalar(0)) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}

/// Three-step angular spread: linear power-weighted mean angle, deviations
/// wrapped into [-pi, pi), then the power-weighted RMS of the deviations.
/// Angles in radians.
template <typename DerivedA, typename DerivedP>
typename DerivedA::Scalar angular_spread_rad(const Eigen::ArrayBase<DerivedA>& angles,
                                             const Eigen::ArrayBase<DerivedP>& powers) {
    using Scalar = typename DerivedA::Scalar;
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar mean = weighted_mean(angles, powers);
    const auto deviation = angles.unaryExpr([mean](Scalar a) { return mod_two_pi(a - mean + pi) - pi; });
    return std::sqrt((deviation.square() * powers).sum() / powers.sum());
}

/// Mean and sample standard deviation (n - 1 denominator; 0 for n == 1).
template <typename Scalar>
struct Moments {
    Scalar mean{0};
    Scalar std_dev{0};
    Eigen::Index count{0};
};

template <typename Derived>
Moments<typename Derived::Scalar> sample_moments(const Eigen::ArrayBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    Moments<Scalar> m;
    m.count = x.size();
    if (m.count == 0) return m;
    m.mean = compensated_sum(x.derived()) / Scalar(m.count);
    if (m.count > 1) {
        const Scalar mean = m.mean;
        CompensatedSum<Scalar> acc;
        for (Eigen::Index i = 0; i < x.size(); ++i) acc.add((x(i) - mean) * (x(i) - mean));
        m.std_dev = std::sqrt(acc.value() / Scalar(m.count - 1));
    }
    return m;
}

} // namespace idschan::stats
