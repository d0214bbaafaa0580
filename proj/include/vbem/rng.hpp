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

#ifndef VBEM_RNG_HPP
#define VBEM_RNG_HPP

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace vbem {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of the child stream `index` inside `domain` of a master seed.
///
/// Streams of distinct (domain, index) pairs are independent for practical
/// purposes, so rounds can be simulated in any order and still reproduce.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t domain, std::uint64_t index) {
    return splitmix64(splitmix64(master ^ splitmix64(domain)) + index);
}

inline Rng child_stream(std::uint64_t master, std::uint64_t domain, std::uint64_t index) {
    return Rng(derive_seed(master, domain, index));
}

// The helpers below avoid the std distributions, whose output is
// implementation defined, so transcripts are identical across standard
// libraries.

/// Uniform double in [0, 1).
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool coin(Rng &rng) {
    return (rng() >> 63) != 0;
}

/// Uniform integer in [0, bound), bound > 0.
inline std::uint64_t uniform_below(Rng &rng, std::uint64_t bound) {
    // Rejection sampling against the largest multiple of bound.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

template <typename T>
void fisher_yates(std::span<T> items, Rng &rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace vbem

#endif
