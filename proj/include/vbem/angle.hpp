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

#ifndef VBEM_ANGLE_HPP
#define VBEM_ANGLE_HPP

#include <complex>
#include <cstdint>
#include <numbers>
#include <ostream>

namespace vbem {

/// An angle from the quantised set {k*pi/4 : k = 0..7}, stored as k.
///
/// All blinding arithmetic (theta + phi' + r*pi) stays inside this set, so it
/// is done exactly on the integer k and only converted to radians when a gate
/// is applied to a state vector.
class Angle {
   public:
    constexpr Angle() = default;
    constexpr explicit Angle(int eighths) : k_(static_cast<std::uint8_t>(((eighths % 8) + 8) % 8)) {
    }

    /// m * pi.
    static constexpr Angle pi_times(int m) {
        return Angle(4 * m);
    }

    constexpr int eighths() const {
        return k_;
    }

    double radians() const {
        return k_ * (std::numbers::pi / 4);
    }

    /// e^{i * angle}, exact for the axis-aligned entries.
    std::complex<double> phase() const {
        constexpr double h = std::numbers::sqrt2 / 2;
        constexpr std::complex<double> table[8] = {
            {1, 0}, {h, h}, {0, 1}, {-h, h}, {-1, 0}, {-h, -h}, {0, -1}, {h, -h},
        };
        return table[k_];
    }

    constexpr Angle operator+(Angle other) const {
        return Angle(k_ + other.k_);
    }
    constexpr Angle operator-(Angle other) const {
        return Angle(k_ - other.k_);
    }
    constexpr Angle operator-() const {
        return Angle(-k_);
    }
    constexpr Angle &operator+=(Angle other) {
        *this = *this + other;
        return *this;
    }
    constexpr bool operator==(const Angle &) const = default;

   private:
    std::uint8_t k_ = 0;
};

inline std::ostream &operator<<(std::ostream &out, Angle a) {
    return out << a.eighths() << "pi/4";
}

}  // namespace vbem

#endif
