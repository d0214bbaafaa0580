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


#ifndef VBEM_PATTERN_CNOT15_HPP
#define VBEM_PATTERN_CNOT15_HPP

#include <vector>

#include "vbem/pattern/graph.hpp"
#include "vbem/pattern/pattern.hpp"

namespace vbem::pattern {

struct BuiltinPattern {
    MeasurementPattern pattern;
    KColouring colouring;
};

/// Fifteen-vertex CNOT pattern on two coupled linear clusters.
///
/// Control wire 0..6, target wire 7..14, one rung between 3 and 7. Inputs
/// are (0, 7), outputs (6, 14). Vertices 7, 8, 9 sit at pi/2, the rest at
/// 0, so each wire carries an even number of Hadamards and the rung CZ is
/// conjugated into a CNOT. Outputs are read in the X basis.
inline BuiltinPattern cnot15() {
    MeasurementPattern p;
    p.num_vertices = 15;
    for (int i = 0; i < 6; ++i) {
        p.edges.push_back({i, i + 1});
    }
    for (int i = 7; i < 14; ++i) {
        p.edges.push_back({i, i + 1});
    }
    p.edges.push_back({3, 7});
    p.inputs = {0, 7};
    p.outputs = {6, 14};
    p.angles.assign(15, 0);
    p.angles[7] = p.angles[8] = p.angles[9] = 2;
    p.flow_order = {0, 1, 2, 7, 3, 8, 4, 9, 5, 10, 11, 12, 13, 6, 14};
    p.flow_successor.assign(15, kNoSuccessor);
    for (int i = 0; i < 6; ++i) {
        p.flow_successor[i] = i + 1;
    }
    for (int i = 7; i < 14; ++i) {
        p.flow_successor[i] = i + 1;
    }

    KColouring c;
    c.k = 2;
    c.classes = {{0, 2, 4, 6, 7, 9, 11, 13}, {1, 3, 5, 8, 10, 12, 14}};
    return {p, c};
}

}  // namespace vbem::pattern

#endif
