// Copyright 2026 The vbem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef VBEM_MITIGATE_CALIBRATE_HPP
#define VBEM_MITIGATE_CALIBRATE_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>

#include "vbem/noise/calibrated.hpp"
#include "vbem/noise/schedule.hpp"
#include "vbem/rng.hpp"
#include "vbem/rounds/rounds.hpp"

namespace vbem::mitigate {

inline constexpr std::uint64_t kCalibrationDomain = 0x63616c6962;  // "calib"

/// Fraction of failed test rounds over `count` rounds with a fixed model.
/// Round i uses child stream (seed, i), so equal seeds give common random
/// numbers across models.
inline double mean_test_failure(const std::shared_ptr<const rounds::RoundContext> &ctx,
                                const sim::NoiseModel &model, std::int64_t count, std::uint64_t seed) {
    rounds::RoundRunner runner(ctx);
    std::int64_t fails = 0;
    for (std::int64_t i = 0; i < count; ++i) {
        Rng rng = child_stream(seed, kCalibrationDomain, static_cast<std::uint64_t>(i));
        fails += !runner.test(model, rng).passed();
    }
    return static_cast<double>(fails) / static_cast<double>(count);
}

struct CalibrationResult {
    double scale = 0;
    double failure = 0;
};

/// Bisects the global scale of `noise::device_shape` until the test failure
/// at level s hits `target`.
inline CalibrationResult calibrate_scale(const std::shared_ptr<const rounds::RoundContext> &ctx, double target,
                                         double s, double exponent, std::int64_t count, std::uint64_t seed,
                                         int iterations = 30) {
    if (!(target > 0 && target < 0.5)) {
        throw std::invalid_argument("calibration target must lie in (0, 1/2)");
    }
    auto failure_at = [&](double scale) {
        return mean_test_failure(ctx, noise::scale_model(noise::device_shape(scale), s, exponent), count, seed);
    };
    double lo = 0;
    double hi = 1;
    while (failure_at(hi) < target) {
        lo = hi;
        hi *= 2;
        if (hi > 1e6) {
            throw std::runtime_error("calibration target unreachable");
        }
    }
    for (int it = 0; it < iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        (failure_at(mid) < target ? lo : hi) = mid;
    }
    return {hi, failure_at(hi)};
}

}  // namespace vbem::mitigate

#endif
