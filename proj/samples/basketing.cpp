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


// Minimal library walk-through: size a basket, simulate a fluctuating-noise
// CNOT experiment and print the verdict.
//
//   build/samples/basketing [seed]

#include <cstdio>
#include <cstdlib>

#include "vbem/vbem.hpp"

int main(int argc, char **argv) {
    using namespace vbem;
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;

    // How long must a basket be for a 5% bound when a test round fails at
    // most 15% of the time?
    estimate::MinimizeOptions opt;
    opt.fixed_tau = 0.9;
    const auto plan = estimate::minimize_n_given_eps({2, 0, 0.15}, 0.05, opt);
    std::printf("basket length %lld, Phi %.4f, eps %.4f\n", static_cast<long long>(plan.n), plan.phi, plan.eps_max);

    auto config = mitigate::reference_experiment(noise::ScheduleKind::random_walk, seed);
    const auto experiment = mitigate::load_experiment(config);
    const auto outcome =
        mitigate::drive_protocol(config, *experiment.context, mitigate::simulation_source(config, experiment));

    for (const auto &pass : outcome.passes) {
        for (const auto &b : pass.baskets) {
            std::printf("basket [%lld, %lld) failure %.3f %s\n", static_cast<long long>(pass.offset + b.range.begin),
                        static_cast<long long>(pass.offset + b.range.end), b.failure_fraction,
                        b.used ? "used" : b.discard_reason.c_str());
        }
    }
    std::printf("verdict %s", mitigate::verdict_name(outcome.status));
    if (outcome.status == mitigate::Verdict::abort) {
        std::printf(" (%s)\n", outcome.reason.c_str());
    } else {
        std::printf(", confidence %.4f\n", outcome.confidence);
    }
    return 0;
}
