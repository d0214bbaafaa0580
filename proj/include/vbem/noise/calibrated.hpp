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


#ifndef VBEM_NOISE_CALIBRATED_HPP
#define VBEM_NOISE_CALIBRATED_HPP

#include "vbem/sim/noise_model.hpp"

namespace vbem::noise {

/// Relative error rates of a superconducting device, before scaling.
inline sim::NoiseModel device_shape(double scale) {
    sim::NoiseModel m;
    m.single_qubit_depolarizing = 2.5e-4 * scale;
    m.two_qubit_depolarizing = 7.5e-3 * scale;
    m.readout_flip = 1.2e-2 * scale;
    m.state_prep_flip = 1.0e-3 * scale;
    return m;
}

/// Scale at which the built-in CNOT pattern fails 15.5% of test rounds at
/// s = 0.9 under the default (2 - s)^8 scaling. Produced by `vbem calibrate`.
inline constexpr double kCalibratedScale = 0.4455275;

inline sim::NoiseModel calibrated_base_model() {
    return device_shape(kCalibratedScale);
}

}  // namespace vbem::noise

#endif
