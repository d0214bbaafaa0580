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
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vbem/angle.hpp"
#include "vbem/rng.hpp"
#include "vbem/sim/noise_model.hpp"
#include "vbem/sim/statevector.hpp"

namespace {

using namespace vbem;
using sim::Complex;
using sim::Pauli;
using sim::StateVector;

constexpr double kTol = 1e-12;
const double kHalf = 1 / std::sqrt(2.0);

void expect_amplitudes(const StateVector &s, const std::vector<Complex> &want, double tol = kTol) {
    ASSERT_EQ(s.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(std::abs(s[i] - want[i]), 0.0, tol) << "amplitude " << i;
    }
}

/// |<a|b>|, which ignores global phase.
double overlap(const StateVector &a, const StateVector &b) {
    Complex sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
    return std::abs(sum);
}

TEST(StateVector, NewStateIsAllZeros) {
    expect_amplitudes(sim::new_state(1), {1, 0});
    expect_amplitudes(sim::new_state(2), {1, 0, 0, 0});
    const auto big = sim::new_state(15);
    EXPECT_EQ(big.size(), 32768u);
    EXPECT_NEAR(big.norm_squared(), 1.0, kTol);
}

TEST(StateVector, RejectsBadWidths) {
    EXPECT_THROW(StateVector(0), std::out_of_range);
    EXPECT_THROW(StateVector(sim::kMaxQubits + 1), std::out_of_range);
}

TEST(StateVector, Hadamard) {
    StateVector s(1);
    s.apply_h(0);
    expect_amplitudes(s, {kHalf, kHalf});
    s.apply_h(0);
    expect_amplitudes(s, {1, 0});
    StateVector one(1);
    one.apply_x(0);
    one.apply_h(0);
    expect_amplitudes(one, {kHalf, -kHalf});
}

TEST(StateVector, RzActsOnPlusStates) {
    StateVector plus(1);
    plus.apply_h(0);
    StateVector same = plus;
    same.apply_rz(0, Angle(0));
    expect_amplitudes(same, {kHalf, kHalf});

    StateVector minus(1);
    minus.apply_x(0);
    minus.apply_h(0);
    StateVector flipped = plus;
    flipped.apply_rz(0, Angle::pi_times(1));
    EXPECT_NEAR(overlap(flipped, minus), 1.0, kTol);

    // |+_{pi/4}> = (|0> + e^{i pi/4}|1>) / sqrt 2
    StateVector quarter = plus;
    quarter.apply_rz(0, Angle(1));
    const Complex ratio = quarter[1] / quarter[0];
    EXPECT_NEAR(std::abs(ratio - std::polar(1.0, M_PI / 4)), 0.0, kTol);
}

TEST(StateVector, ControlledZ) {
    StateVector s(2);
    s.apply_x(0);
    s.apply_x(1);
    s.apply_cz(0, 1);
    expect_amplitudes(s, {0, 0, 0, -1});
    StateVector t(2);
    t.apply_x(1);
    t.apply_cz(0, 1);
    expect_amplitudes(t, {0, 0, 1, 0});
}

TEST(StateVector, GatesPreserveNorm) {
    Rng rng(11);
    StateVector s(6);
    for (int step = 0; step < 500; ++step) {
        const int q = static_cast<int>(uniform_below(rng, 6));
        switch (uniform_below(rng, 5)) {
            case 0: s.apply_h(q); break;
            case 1: s.apply_rz(q, Angle(static_cast<int>(uniform_below(rng, 8)))); break;
            case 2: s.apply_cz(q, (q + 1 + static_cast<int>(uniform_below(rng, 5))) % 6); break;
            case 3: s.apply_pauli(q, static_cast<Pauli>(uniform_below(rng, 4))); break;
            default: s.apply_y(q); break;
        }
    }
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
}

TEST(StateVector, MeasureBasisStateIsCertain) {
    for (double u : {0.0, 0.3, 0.999999}) {
        StateVector s(1);
        EXPECT_EQ(s.measure_z(0, u), 0);
        EXPECT_NEAR(s.norm_squared(), 1.0, kTol);
    }
}

TEST(StateVector, MeasurePlusFollowsBornRule) {
    Rng rng(2024);
    int ones = 0;
    constexpr int kTrials = 10000;
    for (int i = 0; i < kTrials; ++i) {
        StateVector s(1);
        s.apply_h(0);
        ones += s.measure_z(0, rng);
    }
    // Binomial 99.7% band for p = 1/2.
    EXPECT_GE(ones, 4700);
    EXPECT_LE(ones, 5300);
}

TEST(StateVector, BellPairOutcomesAgree) {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        StateVector s(2);
        s.apply_h(0);
        s.apply_h(1);
        s.apply_cz(0, 1);
        s.apply_h(1);  // (|00> + |11>) / sqrt 2
        const int second = s.measure_z(1, rng);
        const int first = s.measure_z(0, rng);
        EXPECT_EQ(first, second);
    }
}

TEST(StateVector, XyMeasurementOfPreparedEigenstate) {
    for (int theta = 0; theta < 8; ++theta) {
        StateVector s(2);
        s.apply_h(0);
        s.apply_rz(0, Angle(theta));  // qubit 0 in |+_theta>
        s.apply_x(1);
        const auto m = s.measure_xy_and_drop(0, Angle(theta), false, 0.999);
        EXPECT_EQ(m.raw, 0);
        EXPECT_NEAR(m.probability, 1.0, kTol);
        ASSERT_EQ(s.num_qubits(), 1);
        expect_amplitudes(s, {0, 1});  // qubit 1 untouched, now qubit 0
    }
}

TEST(StateVector, XyMeasurementInvertsReportedBit) {
    StateVector s(1);
    s.apply_h(0);
    const auto m = s.measure_xy_and_drop(0, Angle(0), true, 0.5);
    EXPECT_EQ(m.raw, 0);
    EXPECT_EQ(m.reported, 1);
}

TEST(StateVector, ProjectionBranchesSumToOne) {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        StateVector s(3);
        for (int q = 0; q < 3; ++q) {
            s.apply_h(q);
            s.apply_rz(q, Angle(static_cast<int>(uniform_below(rng, 8))));
        }
        s.apply_cz(0, 1);
        s.apply_cz(1, 2);
        const Angle d(static_cast<int>(uniform_below(rng, 8)));
        StateVector a = s;
        StateVector b = s;
        const double p0 = a.project_xy_and_drop(1, d, 0);
        const double p1 = b.project_xy_and_drop(1, d, 1);
        EXPECT_NEAR(p0 + p1, 1.0, 1e-12);
        if (p0 > 0) {
            EXPECT_NEAR(a.norm_squared(), 1.0, 1e-10);
        }
    }
}

TEST(StateVector, AppendQubitBuildsProducts) {
    auto s = StateVector::empty();
    s.append_qubit({0, 1});
    s.append_qubit({kHalf, kHalf});
    ASSERT_EQ(s.num_qubits(), 2);
    expect_amplitudes(s, {0, kHalf, 0, kHalf});
}

TEST(NoiseModel, ValidatesProbabilities) {
    sim::NoiseModel m;
    m.readout_flip = -0.1;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m.readout_flip = 1.5;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    EXPECT_THROW((nlohmann::json{{"state_prep_flip", 2.0}}.get<sim::NoiseModel>()), std::invalid_argument);
}

TEST(NoiseModel, JsonRoundTrip) {
    sim::NoiseModel m{0.001, 0.02, 0.03, 0.004};
    EXPECT_EQ(nlohmann::json(m).get<sim::NoiseModel>(), m);
}

TEST(NoiseModel, ZeroProbabilityLeavesStateUnchanged) {
    Rng rng(1);
    StateVector s(2);
    s.apply_h(0);
    const StateVector before = s;
    const sim::NoiseModel none;
    for (int i = 0; i < 100; ++i) {
        EXPECT_TRUE(sim::apply_noise(s, none, {sim::SiteKind::single_qubit_gate, 0}, rng).is_identity());
        EXPECT_TRUE(sim::apply_noise(s, none, {sim::SiteKind::two_qubit_gate, 0, 1}, rng).is_identity());
        EXPECT_TRUE(sim::apply_noise(s, none, {sim::SiteKind::state_prep, 1}, rng).is_identity());
    }
    expect_amplitudes(s, {before[0], before[1], before[2], before[3]});
}

TEST(NoiseModel, CertainSingleQubitErrorIsUniform) {
    Rng rng(77);
    std::vector<std::int64_t> counts(3, 0);
    constexpr int kTrials = 10000;
    for (int i = 0; i < kTrials; ++i) {
        const Pauli p = sim::sample_single_qubit_error(1.0, rng);
        ASSERT_NE(p, Pauli::I);
        ++counts[static_cast<int>(p) - 1];
    }
    for (auto c : counts) EXPECT_NEAR(static_cast<double>(c) / kTrials, 1.0 / 3, 0.02);
    EXPECT_LT(fixtures::chi_square_uniform(counts), fixtures::kChi2Crit2);
}

TEST(NoiseModel, CertainTwoQubitErrorCoversFifteenPaulis) {
    Rng rng(78);
    std::vector<std::int64_t> counts(15, 0);
    for (int i = 0; i < 30000; ++i) {
        const auto [a, b] = sim::sample_two_qubit_error(1.0, rng);
        const int index = static_cast<int>(a) | (static_cast<int>(b) << 2);
        ASSERT_NE(index, 0);
        ++counts[index - 1];
    }
    EXPECT_LT(fixtures::chi_square_uniform(counts), fixtures::kChi2Crit14);
}

TEST(NoiseModel, CertainReadoutFlipInvertsEveryBit) {
    Rng rng(9);
    sim::NoiseModel m;
    m.readout_flip = 1;
    for (int bit : {0, 1, 0, 1}) EXPECT_EQ(sim::noisy_readout(bit, m, rng), bit ^ 1);
}

TEST(NoiseModel, ReadoutSitesAreClassical) {
    Rng rng(1);
    StateVector s(1);
    EXPECT_THROW(sim::apply_noise(s, {}, {sim::SiteKind::readout, 0}, rng), std::invalid_argument);
}

TEST(Rng, ChildStreamsAreReproducibleAndDistinct) {
    Rng a = child_stream(5, 1, 2);
    Rng b = child_stream(5, 1, 2);
    Rng c = child_stream(5, 1, 3);
    const auto va = a();
    EXPECT_EQ(va, b());
    EXPECT_NE(va, c());
}

TEST(Angle, ArithmeticIsModEight) {
    EXPECT_EQ(Angle(9).eighths(), 1);
    EXPECT_EQ(Angle(-1).eighths(), 7);
    EXPECT_EQ((Angle(5) + Angle(6)).eighths(), 3);
    EXPECT_EQ((-Angle(3)).eighths(), 5);
    EXPECT_EQ(Angle::pi_times(3).eighths(), 4);
    EXPECT_NEAR(Angle(2).radians(), M_PI / 2, 1e-15);
}

}  // namespace
