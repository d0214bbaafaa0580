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


#ifndef VBEM_TESTS_TEST_SUPPORT_HPP
#define VBEM_TESTS_TEST_SUPPORT_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "vbem/pattern/pattern.hpp"
#include "vbem/rounds/rounds.hpp"

namespace vbem::fixtures {

/// Path 0-1-2 with input 0, output 2 and flow 0 -> 1 -> 2.
inline pattern::MeasurementPattern path3(std::array<int, 3> angles = {0, 0, 0}) {
    pattern::MeasurementPattern p;
    p.num_vertices = 3;
    p.edges = {{0, 1}, {1, 2}};
    p.inputs = {0};
    p.outputs = {2};
    p.angles = {angles[0], angles[1], angles[2]};
    p.flow_order = {0, 1, 2};
    p.flow_successor = {1, 2, pattern::kNoSuccessor};
    return p;
}

inline pattern::KColouring path3_colouring() {
    return {2, {{0, 2}, {1}}};
}

/// One vertex that is both input and output; computes the identity.
inline pattern::MeasurementPattern single_vertex() {
    pattern::MeasurementPattern p;
    p.num_vertices = 1;
    p.inputs = {0};
    p.outputs = {0};
    p.angles = {0};
    p.flow_order = {0};
    p.flow_successor = {pattern::kNoSuccessor};
    return p;
}

inline std::shared_ptr<const rounds::RoundContext> context(pattern::MeasurementPattern p, pattern::KColouring c) {
    return std::make_shared<const rounds::RoundContext>(std::move(p), std::move(c));
}

/// Pearson statistic against a uniform distribution over counts.size() bins.
inline double chi_square_uniform(const std::vector<std::int64_t> &counts) {
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double chi = 0;
    for (auto c : counts) chi += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
    return chi;
}

// Upper 0.001 quantiles of the chi-square distribution.
inline constexpr double kChi2Crit7 = 24.322;   // 7 degrees of freedom
inline constexpr double kChi2Crit2 = 13.816;   // 2 degrees of freedom
inline constexpr double kChi2Crit14 = 36.123;  // 14 degrees of freedom

}  // namespace vbem::fixtures

#endif
