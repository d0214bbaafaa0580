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


#ifndef VBEM_PATTERN_COMPILE_HPP
#define VBEM_PATTERN_COMPILE_HPP

#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vbem/angle.hpp"
#include "vbem/pattern/pattern.hpp"

namespace vbem::pattern {

/// Initial single-qubit state of one vertex: |+_theta> or |d>.
struct Preparation {
    enum class Kind { plus_theta, basis } kind = Kind::plus_theta;
    Angle theta{0};
    int bit = 0;

    static Preparation plus(Angle theta) {
        return {Kind::plus_theta, theta, 0};
    }
    static Preparation basis_state(int d) {
        return {Kind::basis, Angle(0), d & 1};
    }
};

/// delta = (adaptive ? corrected(phi) : 0) + offset. The decoded outcome
/// is the reported bit XOR `pad`.
struct MeasurementRule {
    bool adaptive = false;
    Angle phi{0};
    Angle offset{0};
    int pad = 0;

    static MeasurementRule fixed(Angle delta, int pad = 0) {
        return {false, Angle(0), delta, pad & 1};
    }
    static MeasurementRule corrected(Angle phi, Angle offset, int pad) {
        return {true, phi, offset, pad & 1};
    }
};

/// Everything a simulator needs for one round: preparations, the CZ layer
/// and flow-ordered measurements whose angles resolve during execution.
struct RoundProgram {
    int num_qubits = 0;
    std::vector<Preparation> preparations;  // by vertex
    std::vector<Edge> entangling;           // CZ order
    std::vector<int> measurement_order;
    std::vector<MeasurementRule> rules;     // by vertex
    std::shared_ptr<const FlowStructure> flow;

    /// Measurement angle of v given decoded outcomes of earlier vertices.
    Angle resolve(int v, const std::vector<int> &decoded) const {
        const MeasurementRule &rule = rules[v];
        if (!rule.adaptive) {
            return rule.offset;
        }
        return corrected_angle(rule.phi, flow->corrections(v, decoded)) + rule.offset;
    }
};

inline RoundProgram compile_round(const MeasurementPattern &pattern, std::shared_ptr<const FlowStructure> flow,
                                  std::vector<Preparation> preparations, std::vector<MeasurementRule> rules) {
    const auto n = static_cast<std::size_t>(pattern.num_vertices);
    if (preparations.size() != n) {
        throw std::invalid_argument("preparation spec covers " + std::to_string(preparations.size()) + " of " +
                                    std::to_string(n) + " vertices");
    }
    if (rules.size() != n) {
        throw std::invalid_argument("measurement rules cover " + std::to_string(rules.size()) + " of " +
                                    std::to_string(n) + " vertices");
    }
    if (!flow) {
        flow = std::make_shared<const FlowStructure>(pattern);
    }
    RoundProgram program;
    program.num_qubits = pattern.num_vertices;
    program.preparations = std::move(preparations);
    program.entangling = pattern.edges;
    program.measurement_order = pattern.flow_order;
    program.rules = std::move(rules);
    program.flow = std::move(flow);
    return program;
}

/// One line of a human-readable gate listing.
struct GateOp {
    enum class Kind { h, x, rz, rz_adaptive, cz, measure } kind;
    int qubit = 0;
    int qubit_b = -1;
    Angle angle{0};

    bool operator==(const GateOp &) const = default;
};

inline const char *gate_name(GateOp::Kind k) {
    switch (k) {
        case GateOp::Kind::h:
            return "H";
        case GateOp::Kind::x:
            return "X";
        case GateOp::Kind::rz:
            return "RZ";
        case GateOp::Kind::rz_adaptive:
            return "RZ?";
        case GateOp::Kind::cz:
            return "CZ";
        case GateOp::Kind::measure:
            return "M";
    }
    return "?";
}

/// Static gate sequence: preparations, CZ layer, then Rz(-delta) H M per
/// vertex in flow order. Zero rotations are omitted.
inline std::vector<GateOp> gate_listing(const RoundProgram &program) {
    using K = GateOp::Kind;
    std::vector<GateOp> ops;
    for (int v = 0; v < program.num_qubits; ++v) {
        const Preparation &prep = program.preparations[v];
        if (prep.kind == Preparation::Kind::plus_theta) {
            ops.push_back({K::h, v});
            if (prep.theta.eighths() != 0) {
                ops.push_back({K::rz, v, -1, prep.theta});
            }
        } else if (prep.bit) {
            ops.push_back({K::x, v});
        }
    }
    for (const Edge &e : program.entangling) {
        ops.push_back({K::cz, e.a, e.b});
    }
    for (int v : program.measurement_order) {
        const MeasurementRule &rule = program.rules[v];
        const bool has_dependencies =
            program.flow->predecessor[v] != -1 || !program.flow->z_dependencies[v].empty();
        if (rule.adaptive && has_dependencies) {
            ops.push_back({K::rz_adaptive, v, -1, rule.phi});
        } else {
            const Angle delta = rule.adaptive ? rule.phi + rule.offset : rule.offset;
            if (delta.eighths() != 0) {
                ops.push_back({K::rz, v, -1, -delta});
            }
        }
        ops.push_back({K::h, v});
        ops.push_back({K::measure, v});
    }
    return ops;
}

inline std::ostream &operator<<(std::ostream &out, const GateOp &op) {
    out << gate_name(op.kind) << ' ' << op.qubit;
    if (op.kind == GateOp::Kind::cz) {
        out << ' ' << op.qubit_b;
    }
    if (op.kind == GateOp::Kind::rz || op.kind == GateOp::Kind::rz_adaptive) {
        out << ' ' << op.angle;
    }
    return out;
}

}  // namespace vbem::pattern

#endif
