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


#ifndef VBEM_NOISE_SCHEDULE_HPP
#define VBEM_NOISE_SCHEDULE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vbem/rng.hpp"
#include "vbem/sim/noise_model.hpp"

namespace vbem::noise {

enum class ScheduleKind { random_walk, constant };

/// Round-indexed noise level s. Low s means high noise.
struct NoiseSchedule {
    ScheduleKind kind = ScheduleKind::random_walk;
    double s_lo = 0.8;
    double s_hi = 1.0;
    std::int64_t step_period = 1000;
    double step_size = 0.05;
    double constant_level = 0.9;
    /// Error probabilities scale by (2 - s)^scaling_exponent.
    double scaling_exponent = 8;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(s_lo <= s_hi) || !(s_lo >= 0) || !(s_hi <= 2)) {
            throw std::invalid_argument("noise bounds must satisfy 0 <= s_lo <= s_hi <= 2");
        }
        if (step_period < 1) {
            throw std::invalid_argument("step_period must be positive");
        }
        if (!(step_size > 0)) {
            throw std::invalid_argument("step_size must be positive");
        }
        if (!(constant_level >= 0 && constant_level <= 2)) {
            throw std::invalid_argument("constant_level must lie in [0, 2]");
        }
        if (!(scaling_exponent > 0)) {
            throw std::invalid_argument("scaling_exponent must be positive");
        }
    }

    /// Lattice half-width: the walk visits mid + j * step_size, |j| <= M.
    std::int64_t half_width() const {
        return static_cast<std::int64_t>(std::floor((s_hi - s_lo) / (2 * step_size) + 1e-9));
    }
};

inline constexpr std::uint64_t kWalkDomain = 0x77616c6b;  // "walk"

/// Direction of walk step `step`: +1 or -1, a pure function of the seed.
inline int walk_direction(std::uint64_t seed, std::int64_t step) {
    return (derive_seed(seed, kWalkDomain, static_cast<std::uint64_t>(step)) >> 63) ? 1 : -1;
}

/// Reflecting walk position after `steps` steps, starting from 0.
inline std::int64_t walk_position(const NoiseSchedule &sch, std::int64_t steps) {
    const std::int64_t m = sch.half_width();
    std::int64_t pos = 0;
    if (m == 0) {
        return 0;
    }
    for (std::int64_t k = 0; k < steps; ++k) {
        pos += walk_direction(sch.seed, k);
        if (pos > m) pos = m - 1;
        if (pos < -m) pos = -m + 1;
    }
    return pos;
}

inline double level_at_position(const NoiseSchedule &sch, std::int64_t pos) {
    const double mid = 0.5 * (sch.s_lo + sch.s_hi);
    return std::clamp(mid + static_cast<double>(pos) * sch.step_size, sch.s_lo, sch.s_hi);
}

/// s_i. Costs O(i / step_period); use NoiseWalk for sequential access.
inline double s_at_round(const NoiseSchedule &sch, std::int64_t i) {
    if (i < 0) {
        throw std::invalid_argument("round index must be non-negative");
    }
    if (sch.kind == ScheduleKind::constant) {
        return sch.constant_level;
    }
    return level_at_position(sch, walk_position(sch, i / sch.step_period));
}

/// Cached walk for repeated queries. Not thread-safe while growing.
class NoiseWalk {
   public:
    explicit NoiseWalk(NoiseSchedule sch) : sch_(sch) {
        sch_.validate();
        positions_.push_back(0);
    }

    const NoiseSchedule &schedule() const {
        return sch_;
    }

    double at(std::int64_t i) {
        if (i < 0) {
            throw std::invalid_argument("round index must be non-negative");
        }
        if (sch_.kind == ScheduleKind::constant) {
            return sch_.constant_level;
        }
        const auto step = static_cast<std::size_t>(i / sch_.step_period);
        const std::int64_t m = sch_.half_width();
        while (positions_.size() <= step) {
            std::int64_t pos = positions_.back();
            if (m > 0) {
                pos += walk_direction(sch_.seed, static_cast<std::int64_t>(positions_.size()) - 1);
                if (pos > m) pos = m - 1;
                if (pos < -m) pos = -m + 1;
            }
            positions_.push_back(pos);
        }
        return level_at_position(sch_, positions_[step]);
    }

   private:
    NoiseSchedule sch_;
    std::vector<std::int64_t> positions_;
};

/// Every probability times (2 - s)^exponent, clamped to [0, 1]. s = 1
/// returns the base model exactly.
inline sim::NoiseModel scale_model(const sim::NoiseModel &base, double s, double exponent = 1) {
    if (!(s >= 0 && s <= 2)) {
        throw std::invalid_argument("noise level s must lie in [0, 2]");
    }
    base.validate();
    const double factor = std::pow(2 - s, exponent);
    auto scale = [factor](double p) { return std::min(1.0, p * factor); };
    sim::NoiseModel out;
    out.single_qubit_depolarizing = scale(base.single_qubit_depolarizing);
    out.two_qubit_depolarizing = scale(base.two_qubit_depolarizing);
    out.readout_flip = scale(base.readout_flip);
    out.state_prep_flip = scale(base.state_prep_flip);
    return out;
}

inline sim::NoiseModel scale_model(const sim::NoiseModel &base, double s, const NoiseSchedule &sch) {
    return scale_model(base, s, sch.scaling_exponent);
}

inline void to_json(nlohmann::json &j, const NoiseSchedule &s) {
    j = nlohmann::json{{"kind", s.kind == ScheduleKind::constant ? "constant" : "random-walk"},
                       {"s_lo", s.s_lo},
                       {"s_hi", s.s_hi},
                       {"step_period", s.step_period},
                       {"step_size", s.step_size},
                       {"constant_level", s.constant_level},
                       {"scaling_exponent", s.scaling_exponent},
                       {"seed", s.seed}};
}

inline void from_json(const nlohmann::json &j, NoiseSchedule &s) {
    NoiseSchedule d;
    const auto kind = j.value("kind", std::string("random-walk"));
    if (kind == "constant") {
        s.kind = ScheduleKind::constant;
    } else if (kind == "random-walk") {
        s.kind = ScheduleKind::random_walk;
    } else {
        throw std::invalid_argument("unknown schedule kind '" + kind + "'");
    }
    s.s_lo = j.value("s_lo", d.s_lo);
    s.s_hi = j.value("s_hi", d.s_hi);
    s.step_period = j.value("step_period", d.step_period);
    s.step_size = j.value("step_size", d.step_size);
    s.constant_level = j.value("constant_level", d.constant_level);
    s.scaling_exponent = j.value("scaling_exponent", d.scaling_exponent);
    s.seed = j.value("seed", d.seed);
    s.validate();
}

}  // namespace vbem::noise

#endif
