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


#ifndef VBEM_ROUNDS_ORACLE_HPP
#define VBEM_ROUNDS_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vbem/pattern/pattern.hpp"
#include "vbem/rng.hpp"
#include "vbem/rounds/rounds.hpp"
#include "vbem/sim/statevector.hpp"

namespace vbem::rounds {

using OutputDistribution = std::map<std::vector<int>, double>;

/// Exact output distribution of an unblinded, noiseless pattern on
/// classical input x, found by branching over every measurement outcome.
/// Input v starts in Z^{x_v}|+>, every other vertex in |+>.
inline OutputDistribution exact_output_distribution(const pattern::MeasurementPattern &p,
                                                    const pattern::FlowStructure &flow, const std::vector<int> &x) {
    const int n = p.num_vertices;
    std::vector<int> input_bit(n, 0);
    for (std::size_t i = 0; i < p.inputs.size(); ++i) {
        input_bit[p.inputs[i]] = x.at(i) & 1;
    }
    constexpr double kHalf = 0.70710678118654752440;
    OutputDistribution dist;

    struct Branch {
        sim::StateVector state = sim::StateVector::empty();
        std::vector<int> slot;
        std::vector<std::uint8_t> applied;
        std::vector<int> outcome;
        double weight = 1;
    };
    Branch root;
    root.slot.assign(n, -1);
    root.applied.assign(p.edges.size(), 0);
    root.outcome.assign(n, -1);

    auto enter = [&](Branch &b, int v) {
        if (b.slot[v] == -1) {
            b.slot[v] = b.state.num_qubits();
            b.state.append_qubit({kHalf, input_bit[v] ? -kHalf : kHalf});
        }
    };
    auto recurse = [&](auto &self, Branch &b, std::size_t k) -> void {
        if (k == p.flow_order.size()) {
            std::vector<int> o;
            for (int v : p.outputs) o.push_back(b.outcome[v]);
            dist[o] += b.weight;
            return;
        }
        const int v = p.flow_order[k];
        enter(b, v);
        for (std::size_t e = 0; e < p.edges.size(); ++e) {
            const auto &edge = p.edges[e];
            if (b.applied[e] || (edge.a != v && edge.b != v)) continue;
            const int w = edge.a == v ? edge.b : edge.a;
            enter(b, w);
            b.state.apply_cz(b.slot[v], b.slot[w]);
            b.applied[e] = 1;
        }
        const Angle delta = pattern::corrected_angle(p, flow, v, b.outcome);
        for (int raw = 0; raw < 2; ++raw) {
            Branch child = b;
            const double prob = child.state.project_xy_and_drop(child.slot[v], delta, raw);
            if (prob == 0) continue;
            const int q = child.slot[v];
            child.slot[v] = -2;
            for (int &s : child.slot) {
                if (s > q) --s;
            }
            child.outcome[v] = raw;
            child.weight *= prob;
            self(self, child, k + 1);
        }
    };
    recurse(recurse, root, 0);
    return dist;
}

/// Bits of `value` as a vector, most significant first.
inline std::vector<int> to_bits(std::uint64_t value, std::size_t width) {
    std::vector<int> bits(width);
    for (std::size_t i = 0; i < width; ++i) {
        bits[i] = static_cast<int>((value >> (width - 1 - i)) & 1);
    }
    return bits;
}

inline std::string bit_string(const std::vector<int> &bits) {
    std::string s;
    for (int b : bits) s += static_cast<char>('0' + (b & 1));
    return s;
}

struct OracleRow {
    std::vector<int> input;
    OutputDistribution exact;
    std::map<std::vector<int>, int> blinded;  // output -> run count
    std::optional<std::vector<int>> expected;
    bool deterministic = false;
    bool blinded_matches_exact = false;
    bool matches_expected = true;

    bool ok() const {
        return deterministic && blinded_matches_exact && matches_expected;
    }
};

/// Runs every classical input through noiseless blinded computation rounds
/// and compares the outputs with the exact semantics and, when given, an
/// expected truth table (indexed by input value).
inline std::vector<OracleRow> run_oracle(const std::shared_ptr<const RoundContext> &ctx, int runs,
                                         std::uint64_t seed,
                                         const std::optional<std::vector<std::vector<int>>> &expected = {}) {
    const auto &p = ctx->pattern();
    const std::size_t width = p.inputs.size();
    RoundRunner runner(ctx);
    ComputationRoundSpec spec;
    spec.decision.table.assign(std::size_t{1} << p.outputs.size(), 0);
    std::vector<OracleRow> rows;
    for (std::uint64_t value = 0; value < (std::uint64_t{1} << width); ++value) {
        OracleRow row;
        row.input = to_bits(value, width);
        row.exact = exact_output_distribution(p, *ctx->flow(), row.input);
        spec.input = row.input;
        for (int i = 0; i < runs; ++i) {
            Rng rng = child_stream(seed, value, static_cast<std::uint64_t>(i));
            auto t = runner.computation(spec, sim::NoiseModel{}, rng);
            ++row.blinded[output_bits(p, t)];
        }
        std::vector<int> likely;
        double best = -1;
        for (const auto &[o, prob] : row.exact) {
            if (prob > best) {
                best = prob;
                likely = o;
            }
        }
        row.deterministic = best > 1 - 1e-9;
        row.blinded_matches_exact = true;
        for (const auto &[o, count] : row.blinded) {
            auto it = row.exact.find(o);
            if (it == row.exact.end() || it->second < 1e-9) {
                row.blinded_matches_exact = false;
            }
        }
        if (row.deterministic && (row.blinded.size() != 1 || row.blinded.begin()->first != likely)) {
            row.blinded_matches_exact = false;
        }
        if (expected) {
            row.expected = expected->at(value);
            row.matches_expected = row.deterministic && likely == *row.expected;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// CNOT on (control, target) bits, indexed by the input value.
inline std::vector<std::vector<int>> cnot_truth_table() {
    return {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
}

/// Output equals input, for patterns with as many outputs as inputs.
inline std::vector<std::vector<int>> identity_truth_table(std::size_t width) {
    std::vector<std::vector<int>> t;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << width); ++v) t.push_back(to_bits(v, width));
    return t;
}

}  // namespace vbem::rounds

#endif
