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

#ifndef VBEM_SIM_NOISE_MODEL_HPP
#define VBEM_SIM_NOISE_MODEL_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "vbem/rng.hpp"
#include "vbem/sim/statevector.hpp"

namespace vbem::sim {

/// Per-site error probabilities of the trajectory noise model.
///
/// Depolarizing sites draw a uniformly random non-identity Pauli on the
/// gate's support with the given probability. Readout flips act on the
/// classical result; preparation flips apply X before a qubit is prepared.
struct NoiseModel {
    double single_qubit_depolarizing = 0;
    double two_qubit_depolarizing = 0;
    double readout_flip = 0;
    double state_prep_flip = 0;

    void validate() const {
        auto check = [](double p, const char *name) {
            if (!(p >= 0 && p <= 1)) {
                throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
            }
        };
        check(single_qubit_depolarizing, "single_qubit_depolarizing");
        check(two_qubit_depolarizing, "two_qubit_depolarizing");
        check(readout_flip, "readout_flip");
        check(state_prep_flip, "state_prep_flip");
    }

    bool is_noiseless() const {
        return single_qubit_depolarizing == 0 && two_qubit_depolarizing == 0 && readout_flip == 0 &&
               state_prep_flip == 0;
    }

    bool operator==(const NoiseModel &) const = default;
};

inline void to_json(nlohmann::json &j, const NoiseModel &m) {
    j = nlohmann::json{{"single_qubit_depolarizing", m.single_qubit_depolarizing},
                       {"two_qubit_depolarizing", m.two_qubit_depolarizing},
                       {"readout_flip", m.readout_flip},
                       {"state_prep_flip", m.state_prep_flip}};
}

inline void from_json(const nlohmann::json &j, NoiseModel &m) {
    m = NoiseModel{};
    m.single_qubit_depolarizing = j.value("single_qubit_depolarizing", 0.0);
    m.two_qubit_depolarizing = j.value("two_qubit_depolarizing", 0.0);
    m.readout_flip = j.value("readout_flip", 0.0);
    m.state_prep_flip = j.value("state_prep_flip", 0.0);
    m.validate();
}

/// Pauli applied by one noise event.
struct PauliError {
    std::vector<int> qubits;
    std::vector<Pauli> labels;

    bool is_identity() const {
        for (Pauli p : labels) {
            if (p != Pauli::I) {
                return false;
            }
        }
        return true;
    }
};

enum class SiteKind { single_qubit_gate, two_qubit_gate, state_prep, readout };

/// Where a noise event may strike: the gate kind plus the qubits it touches.
struct NoiseSite {
    SiteKind kind;
    int qubit_a = 0;
    int qubit_b = -1;
};

/// With probability p, one of X, Y, Z uniformly; otherwise I.
inline Pauli sample_single_qubit_error(double p, Rng &rng) {
    if (!(uniform01(rng) < p)) {
        return Pauli::I;
    }
    return static_cast<Pauli>(1 + uniform_below(rng, 3));
}

/// With probability p, one of the 15 non-identity two-qubit Paulis uniformly.
inline std::pair<Pauli, Pauli> sample_two_qubit_error(double p, Rng &rng) {
    if (!(uniform01(rng) < p)) {
        return {Pauli::I, Pauli::I};
    }
    const auto index = 1 + uniform_below(rng, 15);
    return {static_cast<Pauli>(index & 3), static_cast<Pauli>(index >> 2)};
}

inline bool sample_flip(double p, Rng &rng) {
    return uniform01(rng) < p;
}

/// Samples the error of one gate or preparation site and applies it to the
/// state. Readout sites carry no quantum error; use `noisy_readout`.
inline PauliError apply_noise(StateVector &state, const NoiseModel &model, const NoiseSite &site, Rng &rng) {
    PauliError error;
    switch (site.kind) {
        case SiteKind::single_qubit_gate: {
            error.qubits = {site.qubit_a};
            error.labels = {sample_single_qubit_error(model.single_qubit_depolarizing, rng)};
            break;
        }
        case SiteKind::two_qubit_gate: {
            auto [pa, pb] = sample_two_qubit_error(model.two_qubit_depolarizing, rng);
            error.qubits = {site.qubit_a, site.qubit_b};
            error.labels = {pa, pb};
            break;
        }
        case SiteKind::state_prep: {
            error.qubits = {site.qubit_a};
            error.labels = {sample_flip(model.state_prep_flip, rng) ? Pauli::X : Pauli::I};
            break;
        }
        case SiteKind::readout:
            throw std::invalid_argument("readout noise acts on classical bits; use noisy_readout");
    }
    for (std::size_t i = 0; i < error.qubits.size(); ++i) {
        state.apply_pauli(error.qubits[i], error.labels[i]);
    }
    return error;
}

inline int noisy_readout(int bit, const NoiseModel &model, Rng &rng) {
    return sample_flip(model.readout_flip, rng) ? bit ^ 1 : bit;
}

}  // namespace vbem::sim

#endif
