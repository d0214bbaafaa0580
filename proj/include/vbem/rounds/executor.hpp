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


#ifndef VBEM_ROUNDS_EXECUTOR_HPP
#define VBEM_ROUNDS_EXECUTOR_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vbem/angle.hpp"
#include "vbem/pattern/compile.hpp"
#include "vbem/rng.hpp"
#include "vbem/sim/noise_model.hpp"
#include "vbem/sim/statevector.hpp"

namespace vbem::rounds {

using pattern::RoundProgram;
using sim::Pauli;

/// Every random event of one round, sampled before execution so different
/// simulators can replay the same trajectory.
///
/// Preparation: X flip, state preparation, then a 1q depolarizing Pauli.
/// Entangling: each CZ is followed by its 2q depolarizing Pauli.
/// Measurement: Rz(-delta) is virtual; H is followed by a 1q depolarizing
/// Pauli, then a computational-basis draw `u` and a readout flip.
struct FaultPlan {
    std::vector<std::uint8_t> prep_flip;
    std::vector<Pauli> prep_error;
    std::vector<std::array<Pauli, 2>> cz_error;  // by entangling index
    std::vector<Pauli> measure_error;
    std::vector<std::uint8_t> readout_flip;
    std::vector<double> draw;  // by vertex
};

inline FaultPlan sample_faults(const RoundProgram &program, const sim::NoiseModel &model, Rng &rng) {
    const auto n = static_cast<std::size_t>(program.num_qubits);
    FaultPlan plan;
    plan.prep_flip.resize(n);
    plan.prep_error.resize(n);
    plan.measure_error.resize(n);
    plan.readout_flip.resize(n);
    plan.draw.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        plan.prep_flip[v] = sim::sample_flip(model.state_prep_flip, rng);
        plan.prep_error[v] = sim::sample_single_qubit_error(model.single_qubit_depolarizing, rng);
    }
    plan.cz_error.reserve(program.entangling.size());
    for (std::size_t e = 0; e < program.entangling.size(); ++e) {
        auto [a, b] = sim::sample_two_qubit_error(model.two_qubit_depolarizing, rng);
        plan.cz_error.push_back({a, b});
    }
    for (int v : program.measurement_order) {
        plan.measure_error[v] = sim::sample_single_qubit_error(model.single_qubit_depolarizing, rng);
        plan.readout_flip[v] = sim::sample_flip(model.readout_flip, rng);
        plan.draw[v] = uniform01(rng);
    }
    return plan;
}

/// Per-vertex result of executing a round program.
struct ExecutionRecord {
    std::vector<Angle> delta;
    std::vector<int> reported;
    std::vector<int> decoded;
};

/// Reference executor: one qubit per vertex, every gate applied literally.
class GateLevelExecutor {
   public:
    ExecutionRecord run(const RoundProgram &program, const FaultPlan &plan) const {
        const int n = program.num_qubits;
        sim::StateVector state(n);
        for (int v = 0; v < n; ++v) {
            const auto &prep = program.preparations[v];
            if (plan.prep_flip[v]) {
                state.apply_x(v);
            }
            if (prep.kind == pattern::Preparation::Kind::plus_theta) {
                state.apply_h(v);
                state.apply_rz(v, prep.theta);
            } else if (prep.bit) {
                state.apply_x(v);
            }
            state.apply_pauli(v, plan.prep_error[v]);
        }
        for (std::size_t e = 0; e < program.entangling.size(); ++e) {
            const auto &edge = program.entangling[e];
            state.apply_cz(edge.a, edge.b);
            state.apply_pauli(edge.a, plan.cz_error[e][0]);
            state.apply_pauli(edge.b, plan.cz_error[e][1]);
        }
        ExecutionRecord record{std::vector<Angle>(n, Angle(0)), std::vector<int>(n, -1), std::vector<int>(n, -1)};
        for (int v : program.measurement_order) {
            const Angle delta = program.resolve(v, record.decoded);
            state.apply_rz(v, -delta);
            state.apply_h(v);
            state.apply_pauli(v, plan.measure_error[v]);
            const int raw = state.measure_z(v, plan.draw[v]);
            record.delta[v] = delta;
            record.reported[v] = raw ^ plan.readout_flip[v];
            record.decoded[v] = record.reported[v] ^ program.rules[v].pad;
        }
        return record;
    }
};

/// Fast executor for one fixed graph and measurement order.
///
/// Ideal CZs commute, so a qubit joins the register only when a neighbour
/// is about to be measured, and each CZ is applied just before the first
/// measurement of its endpoints. Measured qubits leave the register at
/// once. CZ faults are pushed past later CZs into a Pauli frame
/// (CZ_ab X_a CZ_ab = X_a Z_b): a frame X negates the measurement angle,
/// a frame Z flips the outcome. Marginals at every measurement equal those
/// of the gate-level executor, so both agree on outcomes for equal plans.
class GraphStateExecutor {
   public:
    GraphStateExecutor(int num_qubits, std::vector<pattern::Edge> entangling, std::vector<int> measurement_order)
        : n_(num_qubits), edges_(std::move(entangling)), order_(std::move(measurement_order)) {
        if (n_ < 1 || static_cast<int>(order_.size()) != n_) {
            throw std::invalid_argument("graph executor needs a full measurement order");
        }
        incident_.resize(n_);
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            incident_.at(edges_[e].a).push_back(static_cast<int>(e));
            incident_.at(edges_[e].b).push_back(static_cast<int>(e));
        }
        locals_.resize(n_);
        slot_.resize(n_);
    }

    explicit GraphStateExecutor(const RoundProgram &shape)
        : GraphStateExecutor(shape.num_qubits, shape.entangling, shape.measurement_order) {}

    ExecutionRecord run(const RoundProgram &program, const FaultPlan &plan) {
        if (program.num_qubits != n_ || program.entangling != edges_ || program.measurement_order != order_) {
            throw std::invalid_argument("program does not match the executor's graph");
        }
        constexpr double kHalf = 0.70710678118654752440;
        for (int v = 0; v < n_; ++v) {
            const auto &prep = program.preparations[v];
            std::array<sim::Complex, 2> local;
            if (prep.kind == pattern::Preparation::Kind::plus_theta) {
                const sim::Complex phase = prep.theta.phase();
                local = {kHalf, (plan.prep_flip[v] ? -kHalf : kHalf) * phase};
            } else {
                const int bit = prep.bit ^ plan.prep_flip[v];
                local = {bit ? 0.0 : 1.0, bit ? 1.0 : 0.0};
            }
            locals_[v] = apply_local(local, plan.prep_error[v]);
        }

        frame_x_.assign(n_, 0);
        frame_z_.assign(n_, 0);
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const int a = edges_[e].a;
            const int b = edges_[e].b;
            frame_z_[b] ^= frame_x_[a];
            frame_z_[a] ^= frame_x_[b];
            for (int side = 0; side < 2; ++side) {
                const int q = side ? b : a;
                const Pauli p = plan.cz_error[e][side];
                frame_x_[q] ^= sim::has_x(p);
                frame_z_[q] ^= sim::has_z(p);
            }
        }

        state_.reset_to_empty();
        std::fill(slot_.begin(), slot_.end(), kAbsent);
        applied_.assign(edges_.size(), 0);
        ExecutionRecord record{std::vector<Angle>(n_, Angle(0)), std::vector<int>(n_, -1), std::vector<int>(n_, -1)};
        for (int v : order_) {
            enter(v);
            for (int e : incident_[v]) {
                if (!applied_[e]) {
                    const int w = edges_[e].a == v ? edges_[e].b : edges_[e].a;
                    enter(w);
                    state_.apply_cz(slot_[v], slot_[w]);
                    applied_[e] = 1;
                }
            }
            const Angle delta = program.resolve(v, record.decoded);
            const Angle basis = frame_x_[v] ? -delta : delta;
            const bool invert = frame_z_[v] ^ sim::has_x(plan.measure_error[v]);
            const int q = slot_[v];
            const auto m = state_.measure_xy_and_drop(q, basis, invert, plan.draw[v]);
            slot_[v] = kMeasured;
            for (int &s : slot_) {
                if (s > q) --s;
            }
            record.delta[v] = delta;
            record.reported[v] = m.reported ^ plan.readout_flip[v];
            record.decoded[v] = record.reported[v] ^ program.rules[v].pad;
        }
        return record;
    }

   private:
    static constexpr int kAbsent = -1;
    static constexpr int kMeasured = -2;

    void enter(int v) {
        if (slot_[v] == kAbsent) {
            slot_[v] = state_.num_qubits();
            state_.append_qubit(locals_[v]);
        } else if (slot_[v] == kMeasured) {
            throw std::logic_error("vertex " + std::to_string(v) + " re-entered after measurement");
        }
    }

    static std::array<sim::Complex, 2> apply_local(std::array<sim::Complex, 2> s, Pauli p) {
        const sim::Complex i(0, 1);
        switch (p) {
            case Pauli::I:
                return s;
            case Pauli::X:
                return {s[1], s[0]};
            case Pauli::Z:
                return {s[0], -s[1]};
            case Pauli::Y:
                return {-i * s[1], i * s[0]};
        }
        return s;
    }

    int n_;
    std::vector<pattern::Edge> edges_;
    std::vector<int> order_;
    std::vector<std::vector<int>> incident_;
    std::vector<std::array<sim::Complex, 2>> locals_;
    std::vector<int> slot_;
    std::vector<std::uint8_t> applied_;
    std::vector<std::uint8_t> frame_x_;
    std::vector<std::uint8_t> frame_z_;
    sim::StateVector state_ = sim::StateVector::empty();
};

}  // namespace vbem::rounds

#endif
