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


#include <cmath>
#include <memory>
#include <set>

#include <gtest/gtest.h>

#include "vbem/mitigate/calibrate.hpp"
#include "vbem/noise/calibrated.hpp"
#include "vbem/noise/schedule.hpp"
#include "vbem/pattern/cnot15.hpp"

namespace {

using namespace vbem;
using namespace vbem::noise;

NoiseSchedule walk(std::uint64_t seed) {
    NoiseSchedule s;
    s.seed = seed;
    return s;
}

TEST(Schedule, ConstantLevel) {
    NoiseSchedule s;
    s.kind = ScheduleKind::constant;
    NoiseWalk w(s);
    for (std::int64_t i : {0, 1, 999, 1000, 54321, 99999}) {
        EXPECT_EQ(s_at_round(s, i), 0.9);
        EXPECT_EQ(w.at(i), 0.9);
    }
}

TEST(Schedule, WalkIsPiecewiseConstantWithinBlocks) {
    NoiseWalk w(walk(3));
    for (std::int64_t block = 0; block < 50; ++block) {
        const double level = w.at(block * 1000);
        for (std::int64_t i = block * 1000; i < (block + 1) * 1000; i += 97) EXPECT_EQ(w.at(i), level);
    }
}

TEST(Schedule, WalkStaysInBoundsOnTheLattice) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto sch = walk(seed);
        NoiseWalk w(sch);
        double previous = w.at(0);
        EXPECT_DOUBLE_EQ(previous, 0.9);
        std::set<long> visited;
        for (std::int64_t i = 0; i < 100000; i += 1000) {
            const double s = w.at(i);
            EXPECT_GE(s, 0.8 - 1e-12);
            EXPECT_LE(s, 1.0 + 1e-12);
            const double steps = (s - 0.9) / sch.step_size;
            EXPECT_NEAR(steps, std::round(steps), 1e-9);
            if (i > 0) {
                EXPECT_NEAR(std::abs(s - previous), sch.step_size, 1e-9);
            }
            visited.insert(std::lround(steps));
            previous = s;
        }
        EXPECT_GE(visited.size(), 3u);  // the walk moves through the interval
    }
}

TEST(Schedule, CachedWalkMatchesDirectEvaluation) {
    const auto sch = walk(17);
    NoiseWalk w(sch);
    for (std::int64_t i = 0; i < 200000; i += 4999) EXPECT_EQ(w.at(i), s_at_round(sch, i));
}

TEST(Schedule, SeedDeterminism) {
    NoiseWalk a(walk(8));
    NoiseWalk b(walk(8));
    NoiseWalk c(walk(9));
    int differences = 0;
    for (std::int64_t i = 0; i < 100000; i += 1000) {
        EXPECT_EQ(a.at(i), b.at(i));
        differences += a.at(i) != c.at(i);
    }
    EXPECT_GT(differences, 0);
}

TEST(Schedule, ValidationAndJson) {
    NoiseSchedule s;
    s.s_lo = 1.1;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = {};
    s.step_period = 0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = walk(4);
    s.kind = ScheduleKind::constant;
    s.constant_level = 0.85;
    const auto back = nlohmann::json(s).get<NoiseSchedule>();
    EXPECT_EQ(nlohmann::json(back), nlohmann::json(s));
    EXPECT_EQ(nlohmann::json(s).at("kind"), "constant");
    EXPECT_THROW(s_at_round(s, -1), std::invalid_argument);
}

TEST(ScaleModel, LinearMapExamples) {
    const sim::NoiseModel base{0.05, 0.05, 0.05, 0.05};
    const auto same = scale_model(base, 1.0);
    EXPECT_EQ(same, base);
    const auto up = scale_model(base, 0.8);
    EXPECT_NEAR(up.single_qubit_depolarizing, 0.06, 1e-15);
    EXPECT_NEAR(up.readout_flip, 0.06, 1e-15);
    const auto clamp = scale_model(sim::NoiseModel{0.9, 0.9, 0.9, 0.9}, 0.9);
    EXPECT_NEAR(clamp.two_qubit_depolarizing, 0.99, 1e-15);
    EXPECT_EQ(scale_model(sim::NoiseModel{0.9, 0.9, 0.9, 0.9}, 0.5).two_qubit_depolarizing, 1.0);
}

TEST(ScaleModel, ExponentFromSchedule) {
    const sim::NoiseModel base{0.01, 0.01, 0.01, 0.01};
    const NoiseSchedule sch;  // exponent 8
    EXPECT_NEAR(scale_model(base, 0.9, sch).readout_flip, 0.01 * std::pow(1.1, 8), 1e-15);
    EXPECT_EQ(scale_model(base, 1.0, sch), base);
    EXPECT_THROW(scale_model(base, 2.5), std::invalid_argument);
    EXPECT_THROW(scale_model(base, -0.1), std::invalid_argument);
}

TEST(Calibration, BaseModelHitsTargetFailureRate) {
    const auto b = pattern::cnot15();
    auto ctx = std::make_shared<const rounds::RoundContext>(b.pattern, b.colouring);
    const auto model = scale_model(calibrated_base_model(), 0.9, NoiseSchedule{});
    const double failure = mitigate::mean_test_failure(ctx, model, 10000, 99);
    EXPECT_NEAR(failure, 0.155, 0.02);
    EXPECT_NEAR(failure, 0.15, 0.02);
}

TEST(Calibration, FailureRateRisesAsSFalls) {
    const auto b = pattern::cnot15();
    auto ctx = std::make_shared<const rounds::RoundContext>(b.pattern, b.colouring);
    const NoiseSchedule sch;
    double previous = 0;
    for (double s : {1.0, 0.9, 0.8}) {
        const double failure = mitigate::mean_test_failure(ctx, scale_model(calibrated_base_model(), s, sch), 10000, 5);
        EXPECT_GT(failure, previous);
        previous = failure;
    }
}

}  // namespace
