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

#ifndef VBEM_PATTERN_GRAPH_HPP
#define VBEM_PATTERN_GRAPH_HPP

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace vbem::pattern {

struct Edge {
    int a = 0;
    int b = 0;

    bool operator==(const Edge &) const = default;
};

inline void to_json(nlohmann::json &j, const Edge &e) {
    j = nlohmann::json::array({e.a, e.b});
}
inline void from_json(const nlohmann::json &j, Edge &e) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("edge must be a pair of vertex indices");
    }
    e.a = j[0].get<int>();
    e.b = j[1].get<int>();
}

/// Simple undirected graph with adjacency lists.
class Graph {
   public:
    Graph() = default;

    Graph(int num_vertices, std::vector<Edge> edges) : edges_(std::move(edges)), adjacency_(num_vertices) {
        if (num_vertices < 0) {
            throw std::invalid_argument("negative vertex count");
        }
        std::set<std::pair<int, int>> seen;
        for (const Edge &e : edges_) {
            if (e.a < 0 || e.b < 0 || e.a >= num_vertices || e.b >= num_vertices) {
                throw std::invalid_argument("edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                                            ") references a missing vertex");
            }
            if (e.a == e.b) {
                throw std::invalid_argument("self-loop on vertex " + std::to_string(e.a));
            }
            if (!seen.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second) {
                throw std::invalid_argument("duplicate edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) + ")");
            }
            adjacency_[e.a].push_back(e.b);
            adjacency_[e.b].push_back(e.a);
        }
        for (auto &list : adjacency_) {
            std::sort(list.begin(), list.end());
        }
    }

    int num_vertices() const {
        return static_cast<int>(adjacency_.size());
    }
    const std::vector<Edge> &edges() const {
        return edges_;
    }
    const std::vector<int> &neighbours(int v) const {
        return adjacency_.at(v);
    }
    int degree(int v) const {
        return static_cast<int>(adjacency_.at(v).size());
    }
    bool has_edge(int a, int b) const {
        const auto &list = adjacency_.at(a);
        return std::binary_search(list.begin(), list.end(), b);
    }

   private:
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;
};

/// Partition of the vertices into k colour classes.
struct KColouring {
    int k = 0;
    std::vector<std::vector<int>> classes;

    /// colour index per vertex, -1 where a vertex is uncovered.
    std::vector<int> colour_map(int num_vertices) const {
        std::vector<int> colour(num_vertices, -1);
        for (int c = 0; c < static_cast<int>(classes.size()); ++c) {
            for (int v : classes[c]) {
                if (v >= 0 && v < num_vertices) {
                    colour[v] = c;
                }
            }
        }
        return colour;
    }

    /// Problems that make this an invalid colouring of the graph.
    std::vector<std::string> violations(const Graph &graph) const {
        std::vector<std::string> out;
        if (k < 1 || k != static_cast<int>(classes.size())) {
            out.push_back("colour count does not match the number of classes");
        }
        std::vector<int> hits(graph.num_vertices(), 0);
        for (const auto &cls : classes) {
            for (int v : cls) {
                if (v < 0 || v >= graph.num_vertices()) {
                    out.push_back("colour class references missing vertex " + std::to_string(v));
                } else {
                    ++hits[v];
                }
            }
        }
        for (int v = 0; v < graph.num_vertices(); ++v) {
            if (hits[v] != 1) {
                out.push_back("vertex " + std::to_string(v) + " appears in " + std::to_string(hits[v]) +
                              " colour classes");
            }
        }
        if (out.empty()) {
            auto colour = colour_map(graph.num_vertices());
            for (const Edge &e : graph.edges()) {
                if (colour[e.a] == colour[e.b]) {
                    out.push_back("edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                                  ") is monochromatic");
                }
            }
        }
        return out;
    }
};

inline void to_json(nlohmann::json &j, const KColouring &c) {
    j = c.classes;
}
inline void from_json(const nlohmann::json &j, KColouring &c) {
    c.classes = j.get<std::vector<std::vector<int>>>();
    c.k = static_cast<int>(c.classes.size());
}

/// Witness that a graph is not bipartite.
struct OddCycle {
    std::vector<int> cycle;
};

/// Breadth-first 2-colouring. Every component is rooted at its smallest
/// vertex, which receives colour 0.
inline std::variant<KColouring, OddCycle> two_colour(const Graph &graph) {
    const int n = graph.num_vertices();
    std::vector<int> colour(n, -1);
    std::vector<int> parent(n, -1);
    for (int root = 0; root < n; ++root) {
        if (colour[root] != -1) {
            continue;
        }
        colour[root] = 0;
        std::queue<int> frontier;
        frontier.push(root);
        while (!frontier.empty()) {
            int u = frontier.front();
            frontier.pop();
            for (int w : graph.neighbours(u)) {
                if (colour[w] == -1) {
                    colour[w] = 1 - colour[u];
                    parent[w] = u;
                    frontier.push(w);
                } else if (colour[w] == colour[u]) {
                    // Walk both tree paths up to their common ancestor.
                    std::vector<int> up_u{u};
                    std::vector<int> up_w{w};
                    std::set<int> ancestors_u{u};
                    for (int x = u; parent[x] != -1;) {
                        x = parent[x];
                        up_u.push_back(x);
                        ancestors_u.insert(x);
                    }
                    int meet = w;
                    while (!ancestors_u.count(meet)) {
                        meet = parent[meet];
                        up_w.push_back(meet);
                    }
                    OddCycle witness;
                    for (int x : up_u) {
                        witness.cycle.push_back(x);
                        if (x == meet) {
                            break;
                        }
                    }
                    for (auto it = up_w.rbegin() + 1; it != up_w.rend(); ++it) {
                        witness.cycle.push_back(*it);
                    }
                    return witness;
                }
            }
        }
    }
    KColouring result;
    result.k = 2;
    result.classes.resize(2);
    for (int v = 0; v < n; ++v) {
        result.classes[colour[v]].push_back(v);
    }
    return result;
}

/// Physical qubit connectivity of a device.
struct CouplingMap {
    int num_qubits = 0;
    std::vector<Edge> edges;

    Graph graph() const {
        return Graph(num_qubits, edges);
    }
};

inline void to_json(nlohmann::json &j, const CouplingMap &c) {
    j = nlohmann::json{{"num_qubits", c.num_qubits}, {"edges", c.edges}};
}
inline void from_json(const nlohmann::json &j, CouplingMap &c) {
    c.edges = j.at("edges").get<std::vector<Edge>>();
    int max_index = -1;
    for (const Edge &e : c.edges) {
        max_index = std::max({max_index, e.a, e.b});
    }
    c.num_qubits = j.value("num_qubits", max_index + 1);
}

/// Heavy-hex layout of a 127-qubit device: seven rows of 14 or 15 qubits
/// joined by bridge qubits every fourth column. Bridges below row r are
/// numbered after row r and before row r + 1.
inline CouplingMap heavy_hex_127() {
    constexpr int kRows = 7;
    CouplingMap map;
    std::vector<std::vector<int>> at(kRows, std::vector<int>(15, -1));
    std::vector<std::pair<int, int>> bridges;  // (bridge id, column) below previous row
    int next = 0;
    for (int r = 0; r < kRows; ++r) {
        const int first = (r == kRows - 1) ? 1 : 0;
        const int last = (r == 0) ? 13 : 14;
        for (int c = first; c <= last; ++c) {
            at[r][c] = next++;
        }
        for (int c = first; c < last; ++c) {
            map.edges.push_back({at[r][c], at[r][c + 1]});
        }
        for (auto [id, c] : bridges) {
            map.edges.push_back({id, at[r][c]});
        }
        bridges.clear();
        if (r + 1 < kRows) {
            for (int c = (r % 2 == 0) ? 0 : 2; c <= 14; c += 4) {
                bridges.emplace_back(next, c);
                map.edges.push_back({at[r][c], next});
                ++next;
            }
        }
    }
    map.num_qubits = next;
    return map;
}

/// Problems with placing a logical graph onto physical qubits.
inline std::vector<std::string> check_embedding(const Graph &logical, const CouplingMap &device,
                                                const std::vector<int> &mapping) {
    std::vector<std::string> out;
    if (static_cast<int>(mapping.size()) != logical.num_vertices()) {
        out.push_back("mapping has " + std::to_string(mapping.size()) + " entries for " +
                      std::to_string(logical.num_vertices()) + " vertices");
        return out;
    }
    std::set<int> used;
    for (int v = 0; v < logical.num_vertices(); ++v) {
        int q = mapping[v];
        if (q < 0 || q >= device.num_qubits) {
            out.push_back("vertex " + std::to_string(v) + " maps to missing qubit " + std::to_string(q));
        } else if (!used.insert(q).second) {
            out.push_back("qubit " + std::to_string(q) + " is used twice");
        }
    }
    if (!out.empty()) {
        return out;
    }
    Graph physical = device.graph();
    for (const Edge &e : logical.edges()) {
        if (!physical.has_edge(mapping[e.a], mapping[e.b])) {
            out.push_back("edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) + ") maps to uncoupled qubits " +
                          std::to_string(mapping[e.a]) + " and " + std::to_string(mapping[e.b]));
        }
    }
    return out;
}

/// Backtracking subgraph-monomorphism search. Candidates are tried in
/// increasing qubit order starting from the vertex's own index.
inline std::optional<std::vector<int>> find_embedding(const Graph &logical, const CouplingMap &device) {
    Graph physical = device.graph();
    const int n = logical.num_vertices();
    const int m = device.num_qubits;
    if (n > m) {
        return std::nullopt;
    }
    // Visit order: BFS so each vertex after the first has a placed neighbour.
    std::vector<int> order;
    std::vector<char> seen(n, 0);
    for (int root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = 1;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            order.push_back(u);
            for (int w : logical.neighbours(u)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    q.push(w);
                }
            }
        }
    }
    std::vector<int> mapping(n, -1);
    std::vector<char> taken(m, 0);
    auto fits = [&](int v, int qubit) {
        if (taken[qubit] || physical.degree(qubit) < logical.degree(v)) return false;
        for (int w : logical.neighbours(v)) {
            if (mapping[w] != -1 && !physical.has_edge(mapping[w], qubit)) return false;
        }
        return true;
    };
    auto search = [&](auto &self, std::size_t depth) -> bool {
        if (depth == order.size()) return true;
        int v = order[depth];
        int anchor = -1;
        for (int w : logical.neighbours(v)) {
            if (mapping[w] != -1) {
                anchor = mapping[w];
                break;
            }
        }
        std::vector<int> candidates;
        if (anchor == -1) {
            for (int i = 0; i < m; ++i) candidates.push_back((v + i) % m);
        } else {
            candidates = physical.neighbours(anchor);
            std::stable_partition(candidates.begin(), candidates.end(), [v](int q) { return q == v; });
        }
        for (int qubit : candidates) {
            if (!fits(v, qubit)) continue;
            mapping[v] = qubit;
            taken[qubit] = 1;
            if (self(self, depth + 1)) return true;
            mapping[v] = -1;
            taken[qubit] = 0;
        }
        return false;
    };
    if (!search(search, 0)) {
        return std::nullopt;
    }
    return mapping;
}

}  // namespace vbem::pattern

#endif
