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

#ifndef VBEM_PATTERN_PATTERN_HPP
#define VBEM_PATTERN_PATTERN_HPP

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vbem/angle.hpp"
#include "vbem/pattern/graph.hpp"

namespace vbem::pattern {

inline constexpr int kNoSuccessor = -1;

/// Graph, inputs, outputs, angles in units of pi/4 and a causal flow.
/// Angles are kept as raw integers so that out-of-range values survive
/// parsing and show up in `validate_pattern`.
struct MeasurementPattern {
    int num_vertices = 0;
    std::vector<Edge> edges;
    std::vector<int> inputs;
    std::vector<int> outputs;
    std::vector<int> angles;
    std::vector<int> flow_order;
    std::vector<int> flow_successor;  // kNoSuccessor for outputs

    Graph graph() const {
        return Graph(num_vertices, edges);
    }
    Angle angle(int v) const {
        return Angle(angles.at(v));
    }
    bool is_output(int v) const {
        return std::find(outputs.begin(), outputs.end(), v) != outputs.end();
    }
    bool is_input(int v) const {
        return std::find(inputs.begin(), inputs.end(), v) != inputs.end();
    }
};

/// All structural problems with a pattern. Empty means valid.
inline std::vector<std::string> validate_pattern(const MeasurementPattern &p) {
    std::vector<std::string> out;
    const int n = p.num_vertices;
    auto in_range = [n](int v) { return v >= 0 && v < n; };
    auto name = [](int v) { return std::to_string(v); };
    if (n < 1) {
        out.push_back("pattern has no vertices");
        return out;
    }

    std::set<std::pair<int, int>> seen_edges;
    bool edges_ok = true;
    for (const Edge &e : p.edges) {
        if (!in_range(e.a) || !in_range(e.b)) {
            out.push_back("edge (" + name(e.a) + ", " + name(e.b) + ") references a missing vertex");
            edges_ok = false;
        } else if (e.a == e.b) {
            out.push_back("self-loop on vertex " + name(e.a));
            edges_ok = false;
        } else if (!seen_edges.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second) {
            out.push_back("duplicate edge (" + name(e.a) + ", " + name(e.b) + ")");
            edges_ok = false;
        }
    }

    auto check_subset = [&](const std::vector<int> &set, const char *what) {
        std::set<int> unique;
        for (int v : set) {
            if (!in_range(v)) {
                out.push_back(std::string(what) + " vertex " + name(v) + " does not exist");
            } else if (!unique.insert(v).second) {
                out.push_back(std::string(what) + " vertex " + name(v) + " listed twice");
            }
        }
    };
    check_subset(p.inputs, "input");
    check_subset(p.outputs, "output");

    if (static_cast<int>(p.angles.size()) != n) {
        out.push_back("expected " + name(n) + " angles, found " + std::to_string(p.angles.size()));
    }
    for (std::size_t v = 0; v < p.angles.size(); ++v) {
        if (p.angles[v] < 0 || p.angles[v] > 7) {
            out.push_back("angle outside Θ at vertex " + std::to_string(v) + " (index " + name(p.angles[v]) + ")");
        }
    }

    std::vector<int> position(n, -1);
    bool order_ok = static_cast<int>(p.flow_order.size()) == n;
    for (std::size_t k = 0; k < p.flow_order.size(); ++k) {
        int v = p.flow_order[k];
        if (!in_range(v) || position[v] != -1) {
            order_ok = false;
            break;
        }
        position[v] = static_cast<int>(k);
    }
    if (!order_ok) {
        out.push_back("flow order is not a permutation of the vertices");
    }
    if (static_cast<int>(p.flow_successor.size()) != n) {
        out.push_back("expected " + name(n) + " flow successor entries, found " +
                      std::to_string(p.flow_successor.size()));
        return out;
    }
    if (!edges_ok) {
        return out;
    }

    Graph g(n, p.edges);
    std::vector<int> predecessor(n, -1);
    for (int i = 0; i < n; ++i) {
        const int f = p.flow_successor[i];
        const bool output = p.is_output(i);
        if (output) {
            if (f != kNoSuccessor) {
                out.push_back("output vertex " + name(i) + " has a flow successor");
            }
            continue;
        }
        if (f == kNoSuccessor) {
            out.push_back("measured vertex " + name(i) + " has no flow successor");
            continue;
        }
        if (!in_range(f)) {
            out.push_back("flow successor of " + name(i) + " does not exist");
            continue;
        }
        if (!g.has_edge(i, f)) {
            out.push_back("flow successor not neighbour: f(" + name(i) + ") = " + name(f));
        }
        if (p.is_input(f)) {
            out.push_back("flow successor of " + name(i) + " is input vertex " + name(f));
        }
        if (predecessor[f] != -1) {
            out.push_back("flow successor " + name(f) + " shared by " + name(predecessor[f]) + " and " + name(i));
        }
        predecessor[f] = i;
        if (order_ok) {
            if (position[f] <= position[i]) {
                out.push_back("flow successor of " + name(i) + " is not later in flow order");
            }
            for (int w : g.neighbours(f)) {
                if (w != i && position[w] <= position[i]) {
                    out.push_back("neighbour " + name(w) + " of f(" + name(i) + ") precedes " + name(i) +
                                  " in flow order");
                }
            }
        }
    }
    return out;
}

/// Correction bits of one vertex.
struct CorrectionState {
    int s_x = 0;
    int s_z = 0;
};

/// Correction dependencies derived from a valid pattern's flow.
struct FlowStructure {
    std::vector<int> predecessor;                 // f^-1(v), or -1
    std::vector<std::vector<int>> z_dependencies;  // i with v in N(f(i)), v != i
    std::vector<int> position;                     // index of v in flow order

    explicit FlowStructure(const MeasurementPattern &p) {
        const int n = p.num_vertices;
        Graph g = p.graph();
        predecessor.assign(n, -1);
        z_dependencies.assign(n, {});
        position.assign(n, -1);
        for (int k = 0; k < n; ++k) {
            position[p.flow_order[k]] = k;
        }
        for (int i = 0; i < n; ++i) {
            const int f = p.flow_successor[i];
            if (f == kNoSuccessor) {
                continue;
            }
            predecessor[f] = i;
            for (int v : g.neighbours(f)) {
                if (v != i) {
                    z_dependencies[v].push_back(i);
                }
            }
        }
        for (auto &deps : z_dependencies) {
            std::sort(deps.begin(), deps.end());
        }
    }

    /// Correction bits for v from decoded outcomes (-1 marks unmeasured).
    CorrectionState corrections(int v, const std::vector<int> &outcomes) const {
        CorrectionState c;
        auto read = [&](int i) {
            if (outcomes.at(i) < 0) {
                throw std::logic_error("correction for vertex " + std::to_string(v) + " needs unmeasured vertex " +
                                       std::to_string(i));
            }
            return outcomes[i] & 1;
        };
        if (predecessor.at(v) != -1) {
            c.s_x = read(predecessor[v]);
        }
        for (int i : z_dependencies[v]) {
            c.s_z ^= read(i);
        }
        return c;
    }
};

/// (-1)^{s_X} phi + s_Z pi.
inline Angle corrected_angle(Angle phi, CorrectionState c) {
    Angle a = c.s_x ? -phi : phi;
    return c.s_z ? a + Angle::pi_times(1) : a;
}

inline Angle corrected_angle(const MeasurementPattern &p, const FlowStructure &flow, int v,
                             const std::vector<int> &outcomes) {
    return corrected_angle(p.angle(v), flow.corrections(v, outcomes));
}

inline void to_json(nlohmann::json &j, const MeasurementPattern &p) {
    nlohmann::json successors = nlohmann::json::object();
    for (int v = 0; v < static_cast<int>(p.flow_successor.size()); ++v) {
        if (p.flow_successor[v] != kNoSuccessor) {
            successors[std::to_string(v)] = p.flow_successor[v];
        }
    }
    j = nlohmann::json{{"vertices", p.num_vertices}, {"edges", p.edges},         {"inputs", p.inputs},
                       {"outputs", p.outputs},       {"angles", p.angles},       {"flow_order", p.flow_order},
                       {"flow_successor", successors}};
}

inline void from_json(const nlohmann::json &j, MeasurementPattern &p) {
    p.num_vertices = j.at("vertices").get<int>();
    p.edges = j.at("edges").get<std::vector<Edge>>();
    p.inputs = j.at("inputs").get<std::vector<int>>();
    p.outputs = j.at("outputs").get<std::vector<int>>();
    p.angles = j.at("angles").get<std::vector<int>>();
    p.flow_order = j.at("flow_order").get<std::vector<int>>();
    p.flow_successor.assign(std::max(p.num_vertices, 0), kNoSuccessor);
    const auto &succ = j.at("flow_successor");
    auto assign = [&](int v, const nlohmann::json &value) {
        if (v < 0 || v >= p.num_vertices) {
            throw std::invalid_argument("flow_successor key " + std::to_string(v) + " is not a vertex");
        }
        p.flow_successor[v] = value.is_null() ? kNoSuccessor : value.get<int>();
    };
    if (succ.is_object()) {
        for (const auto &[key, value] : succ.items()) {
            assign(std::stoi(key), value);
        }
    } else if (succ.is_array()) {
        for (int v = 0; v < static_cast<int>(succ.size()); ++v) {
            assign(v, succ[v]);
        }
    } else {
        throw std::invalid_argument("flow_successor must be an object or an array");
    }
}

}  // namespace vbem::pattern

#endif
