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


#ifndef VBEM_MITIGATE_SCHEDULE_HPP
#define VBEM_MITIGATE_SCHEDULE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vbem/rng.hpp"
#include "vbem/rounds/rounds.hpp"

namespace vbem::mitigate {

/// Half-open range of round indices [begin, end).
struct RoundRange {
    std::int64_t begin = 0;
    std::int64_t end = 0;

    std::int64_t size() const {
        return end - begin;
    }
    bool contains(std::int64_t i) const {
        return i >= begin && i < end;
    }
    bool operator==(const RoundRange &) const = default;
};

/// Fixed order of test and computation rounds, cut into contiguous groups.
struct Schedule {
    std::vector<rounds::RoundKind> kinds;
    std::vector<RoundRange> groups;

    std::int64_t total() const {
        return static_cast<std::int64_t>(kinds.size());
    }
    std::int64_t count(rounds::RoundKind k) const {
        std::int64_t c = 0;
        for (auto kind : kinds) c += kind == k;
        return c;
    }
};

/// Equal contiguous groups; the remainder goes to the last group.
inline std::vector<RoundRange> equal_groups(std::int64_t total, int g) {
    std::vector<RoundRange> groups;
    const std::int64_t size = total / g;
    for (int i = 0; i < g; ++i) {
        const std::int64_t begin = i * size;
        groups.push_back({begin, i + 1 == g ? total : begin + size});
    }
    return groups;
}

/// round(tau * total) test rounds and the rest computation rounds in a
/// uniformly random order.
inline Schedule make_schedule(std::int64_t total, double tau, int g, std::int64_t min_group, Rng &rng) {
    if (!(tau > 0 && tau < 1)) {
        throw std::invalid_argument("tau must lie in (0, 1)");
    }
    if (g < 1) {
        throw std::invalid_argument("group count must be positive");
    }
    if (total < 1 || total < static_cast<std::int64_t>(g) * min_group) {
        throw std::invalid_argument("total rounds " + std::to_string(total) + " cannot hold " + std::to_string(g) +
                                    " groups of " + std::to_string(min_group));
    }
    const auto tests = static_cast<std::int64_t>(std::llround(tau * static_cast<double>(total)));
    Schedule s;
    s.kinds.assign(total, rounds::RoundKind::computation);
    std::fill(s.kinds.begin(), s.kinds.begin() + tests, rounds::RoundKind::test);
    fisher_yates(std::span<rounds::RoundKind>(s.kinds), rng);
    s.groups = equal_groups(total, g);
    return s;
}

}  // namespace vbem::mitigate

#endif
