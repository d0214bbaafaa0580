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


#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "vbem/manifest.hpp"
#include "vbem/mitigate/analysis.hpp"
#include "vbem/mitigate/protocol.hpp"
#include "vbem/mitigate/report.hpp"
#include "vbem/mitigate/schedule.hpp"

namespace {

using namespace vbem;

std::int64_t uniform_int(Rng &rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}
using namespace vbem::mitigate;
using rounds::RoundKind;

RoundSummary test_round(bool pass) {
    return {RoundKind::test, pass ? 1 : 0, false};
}
RoundSummary computation_round(int q) {
    return {RoundKind::computation, q, false};
}

TEST(Schedule, CountsAndGroups) {
    Rng rng(1);
    const Schedule s = make_schedule(100000, 0.9, 3, 10000, rng);
    EXPECT_EQ(s.total(), 100000);
    EXPECT_EQ(s.count(RoundKind::test), 90000);
    EXPECT_EQ(s.count(RoundKind::computation), 10000);
    ASSERT_EQ(s.groups.size(), 3u);
    EXPECT_EQ(s.groups.front().begin, 0);
    EXPECT_EQ(s.groups.back().end, 100000);
    for (std::size_t i = 1; i < s.groups.size(); ++i) EXPECT_EQ(s.groups[i].begin, s.groups[i - 1].end);
}

TEST(Schedule, OrderIsShuffledAndSeeded) {
    Rng a(5), b(5), c(6);
    const auto sa = make_schedule(10000, 0.5, 1, 1, a);
    EXPECT_EQ(sa.kinds, make_schedule(10000, 0.5, 1, 1, b).kinds);
    EXPECT_NE(sa.kinds, make_schedule(10000, 0.5, 1, 1, c).kinds);
    // The first half is not all tests, as it would be without the shuffle.
    const auto first_half = std::count(sa.kinds.begin(), sa.kinds.begin() + 5000, RoundKind::test);
    EXPECT_GT(first_half, 2300);
    EXPECT_LT(first_half, 2700);
}

TEST(Schedule, RejectsGroupsLargerThanTheStream) {
    Rng rng(1);
    EXPECT_THROW(make_schedule(1000, 0.9, 1, 2000, rng), std::invalid_argument);
    EXPECT_THROW(make_schedule(1000, 1.0, 1, 10, rng), std::invalid_argument);
    EXPECT_THROW(make_schedule(1000, 0.5, 0, 10, rng), std::invalid_argument);
}

std::vector<double> brute_phi(const std::vector<RoundSummary> &r, std::int64_t window, const RoundRange &g,
                              std::int64_t i) {
    std::int64_t tests = 0, fails = 0;
    for (std::int64_t j = i - window / 2; j <= i + window / 2; ++j) {
        if (!g.contains(j) || r[j].kind != RoundKind::test) continue;
        ++tests;
        fails += r[j].failed_test();
    }
    return {tests ? double(fails) / double(tests) : 0.0, tests ? 0.0 : 1.0};
}

TEST(RollingRate, MatchesBruteForce) {
    Rng rng(11);
    std::vector<RoundSummary> r(3000);
    for (auto &x : r) {
        x = uniform_int(rng, 0, 2) ? test_round(uniform_int(rng, 0, 4) != 0) : computation_round(1);
        x.discarded = uniform_int(rng, 0, 49) == 0;
    }
    const auto groups = equal_groups(3000, 3);
    for (std::int64_t window : {2, 7, 100, 5000}) {
        const auto phi = rolling_failure_rate(r, window, groups);
        for (const auto &g : groups) {
            for (std::int64_t i = g.begin; i < g.end; i += 13) {
                const auto expect = brute_phi(r, window, g, i);
                EXPECT_NEAR(phi.phi[i], expect[0], 1e-12) << "i=" << i << " T=" << window;
                EXPECT_EQ(phi.empty_window[i], expect[1]);
            }
        }
    }
}

TEST(RollingRate, Extremes) {
    std::vector<RoundSummary> pass(200, test_round(true)), fail(200, test_round(false)), alt;
    for (int i = 0; i < 200; ++i) alt.push_back(test_round(i % 2));
    const auto g = equal_groups(200, 1);
    for (double v : rolling_failure_rate(pass, 20, g).phi) EXPECT_EQ(v, 0.0);
    for (double v : rolling_failure_rate(fail, 20, g).phi) EXPECT_EQ(v, 1.0);
    for (double v : rolling_failure_rate(alt, 20, g).phi) EXPECT_NEAR(v, 0.5, 0.05);
    EXPECT_THROW(rolling_failure_rate(pass, 1, g), std::invalid_argument);
}

void expect_well_formed(const std::vector<double> &phi, double p_tilde, std::int64_t n,
                        const std::vector<RoundRange> &groups, const std::vector<std::pair<int, RoundRange>> &found) {
    std::int64_t last_end = -1;
    for (const auto &[gi, b] : found) {
        const RoundRange &g = groups.at(gi);
        ASSERT_TRUE(g.begin <= b.begin && b.end <= g.end);
        ASSERT_GT(b.size(), 0);
        EXPECT_GE(2 * b.size(), n);
        EXPECT_GT(b.begin, last_end - 1);
        last_end = b.end;
        for (std::int64_t i = b.begin; i < b.end; ++i) ASSERT_LE(phi[i], p_tilde);
        if (b.begin > g.begin) {
            EXPECT_GT(phi[b.begin - 1], p_tilde);
        }
        if (b.end < g.end) {
            EXPECT_GT(phi[b.end], p_tilde);
        }
    }
    // Completeness: every long enough low run inside a group is reported.
    std::size_t expected = 0;
    for (const auto &g : groups) {
        std::int64_t run = 0;
        for (std::int64_t i = g.begin; i <= g.end; ++i) {
            if (i < g.end && phi[i] <= p_tilde) {
                ++run;
            } else {
                expected += run > 0 && 2 * run >= n;
                run = 0;
            }
        }
    }
    EXPECT_EQ(found.size(), expected);
}

TEST(Baskets, FuzzWellFormed) {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto total = uniform_int(rng, 1, 400);
        const int g = static_cast<int>(uniform_int(rng, 1, 4));
        std::vector<double> phi(total);
        double level = 0.1;
        for (auto &v : phi) {
            if (uniform_int(rng, 0, 9) == 0) level = uniform01(rng) * 0.3;
            v = level;
        }
        const auto groups = equal_groups(total, g);
        const std::int64_t n = uniform_int(rng, 1, 60);
        expect_well_formed(phi, 0.15, n, groups, find_baskets(phi, 0.15, n, groups));
    }
}

TEST(Baskets, WholeGroupAndNone) {
    const auto groups = equal_groups(10000, 2);
    const auto zero = find_baskets(std::vector<double>(10000, 0.0), 0.15, 5000, groups);
    ASSERT_EQ(zero.size(), 2u);
    EXPECT_EQ(zero[0].second, (RoundRange{0, 5000}));
    EXPECT_EQ(zero[1].second, (RoundRange{5000, 10000}));
    EXPECT_TRUE(find_baskets(std::vector<double>(10000, 0.16), 0.15, 5000, groups).empty());
}

TEST(Baskets, SyntheticRangesGiveQuotedSizes) {
    std::vector<double> phi(100000, 0.3);
    for (std::int64_t i = 14079; i < 19277; ++i) phi[i] = 0.1;
    for (std::int64_t i = 71721; i < 78539; ++i) phi[i] = 0.1;
    const auto found = find_baskets(phi, 0.15, 10000, equal_groups(100000, 1));
    ASSERT_EQ(found.size(), 2u);
    EXPECT_EQ(found[0].second, (RoundRange{14079, 19277}));
    EXPECT_EQ(found[0].second.size(), 5198);
    EXPECT_EQ(found[1].second.size(), 6818);
    // A run one round short of N/2 is dropped.
    for (std::int64_t i = 14079; i < 14079 + 202; ++i) phi[i] = 0.3;
    EXPECT_EQ(find_baskets(phi, 0.15, 10000, equal_groups(100000, 1)).size(), 1u);
}

TEST(Vote, MajorityAndTie) {
    std::vector<RoundSummary> r = {computation_round(1), test_round(false), computation_round(1),
                                   computation_round(0)};
    const auto v = basket_vote(r, {0, 4});
    EXPECT_EQ(v.computations, 3);
    EXPECT_EQ(v.outcome, 1);
    const auto tie = basket_vote(r, {1, 4});
    EXPECT_FALSE(tie.outcome);
    EXPECT_EQ(tie.discard_reason, "tied vote");
    EXPECT_FALSE(basket_vote(r, {1, 2}).outcome);
    r[0].discarded = true;  // discarded rounds do not vote
    EXPECT_FALSE(basket_vote(r, {0, 4}).outcome);
}

std::vector<RoundSummary> synthetic_basket(std::int64_t size, std::int64_t tests, std::int64_t failed) {
    std::vector<RoundSummary> r;
    for (std::int64_t i = 0; i < size; ++i) {
        r.push_back(i < tests ? test_round(i >= failed) : computation_round(1));
    }
    return r;
}

TEST(Certify, AcceptsBelowPhiAndDiscardsAbove) {
    const estimate::BoundInputs in{2, 0, 0.15};
    estimate::MinimizeOptions opt;
    opt.fixed_tau = 0.9;
    const auto ref = estimate::minimize_eps_given_n(in, 10000, opt);
    ASSERT_TRUE(ref.ok());

    auto make = [&](double fraction) {
        const auto failed = static_cast<std::int64_t>(std::ceil(fraction * 9000));
        const auto r = synthetic_basket(10000, 9000, failed);
        Basket b = measure_basket(r, 0, {0, 10000});
        b.vote = basket_vote(r, b.range);
        basket_certify(b, in);
        return b;
    };
    const Basket good = make(ref.phi - 0.01);
    EXPECT_TRUE(good.used) << good.discard_reason;
    EXPECT_NEAR(good.q1, 1 - good.certificate->eps_max, 1e-15);
    EXPECT_NEAR(good.q1, 1 - ref.eps_max, 1e-6);
    const Basket bad = make(ref.phi + 0.01);
    EXPECT_FALSE(bad.used);
    EXPECT_EQ(bad.discard_reason, "failure fraction not below Phi");
}

TEST(Bayes, ExactArithmetic) {
    Posterior p;
    EXPECT_EQ(p.p1(), 0.5);
    p = bayes_update(p, 0.17, 0.83);
    EXPECT_NEAR(p.p1(), 0.83, 1e-12);
    p = bayes_update(p, 0.08, 0.92);
    EXPECT_NEAR(p.p1(), 1909.0 / 1943.0, 1e-12);
    EXPECT_NEAR(p.p0() + p.p1(), 1.0, 1e-12);
    const auto same = bayes_update(p, 0.5, 0.5);
    EXPECT_EQ(same.p1(), p.p1());
    EXPECT_EQ(same.updates(), 3);
}

TEST(Bayes, CommutativeAndNormalised) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> qs;
        for (int i = 0; i < 6; ++i) qs.push_back(0.01 + 0.98 * uniform01(rng));
        Posterior fwd, rev;
        for (double q : qs) fwd = bayes_update(fwd, 1 - q, q);
        for (auto it = qs.rbegin(); it != qs.rend(); ++it) rev = bayes_update(rev, 1 - *it, *it);
        EXPECT_NEAR(fwd.p1(), rev.p1(), 1e-12);
        EXPECT_NEAR(fwd.p0() + fwd.p1(), 1.0, 1e-12);
    }
    Posterior p;
    for (int i = 0; i < 5000; ++i) p = bayes_update(p, 0.01, 0.99);  // no underflow
    EXPECT_EQ(p.p1(), 1.0);
    EXPECT_GT(p.log_odds(), 1e4);
}

TEST(Bayes, RejectsInvalidQ) {
    EXPECT_THROW(bayes_update({}, 0, 1), std::invalid_argument);
    EXPECT_THROW(bayes_update({}, 0.3, 0.3), std::invalid_argument);
    EXPECT_THROW(bayes_update({}, -0.1, 1.1), std::invalid_argument);
}

ExperimentConfig desk_config(std::uint64_t seed) {
    ExperimentConfig c;
    c.noise_model = "builtin:noiseless";
    c.total_rounds = 20000;
    c.basket_size = 2000;
    c.tau = 0.9;
    c.seed = seed;
    c.schedule.seed = seed;
    c.max_repetitions = 1;
    return c;
}

TEST(Protocol, NoiselessDeskRunsAreTrue) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto c = desk_config(seed);
        const auto e = load_experiment(c);
        const auto out = drive_protocol(c, *e.context, simulation_source(c, e));
        ASSERT_EQ(out.status, Verdict::true_) << "seed " << seed << " reason " << out.reason;
        EXPECT_GE(out.confidence, 1 - c.eps_target);
        ASSERT_EQ(out.passes.size(), 1u);
        EXPECT_EQ(out.passes[0].failed_tests, 0);
    }
}

TEST(Protocol, AllFailingTestsGiveNoBaskets) {
    const auto c = desk_config(1);
    const auto e = load_experiment(c);
    RoundSource source = [](int, const Schedule &s) -> std::optional<PassData> {
        PassData d;
        for (auto k : s.kinds) d.rounds.push_back(k == RoundKind::test ? test_round(false) : computation_round(1));
        return d;
    };
    const auto out = drive_protocol(c, *e.context, source);
    EXPECT_EQ(out.status, Verdict::abort);
    EXPECT_EQ(out.reason, "no-baskets");
}

TEST(Protocol, EstimationInfeasibleWhenNotPinned) {
    auto c = desk_config(1);
    c.basket_size.reset();
    c.p_tilde = 0.3;  // above r/k for two colours
    const auto e = load_experiment(c);
    const auto out = drive_protocol(c, *e.context, simulation_source(c, e));
    EXPECT_EQ(out.status, Verdict::abort);
    EXPECT_EQ(out.reason, "estimation-infeasible");
}

TEST(Protocol, ReplayReproducesTheVerdict) {
    auto c = desk_config(4);
    c.noise_model = "builtin:calibrated";
    const auto e = load_experiment(c);
    std::vector<rounds::RoundTranscript> stored;
    const auto live = drive_protocol(c, *e.context,
                                     simulation_source(c, e, [&](const rounds::RoundTranscript &t) { stored.push_back(t); }));
    ASSERT_EQ(static_cast<std::int64_t>(stored.size()), c.total_rounds * static_cast<std::int64_t>(live.passes.size()));
    const auto replayed = drive_protocol(c, *e.context, replay_source(c, stored));
    EXPECT_EQ(nlohmann::json(live).dump(), nlohmann::json(replayed).dump());

    std::swap(stored[0], stored[1]);
    EXPECT_THROW(drive_protocol(c, *e.context, replay_source(c, stored)), std::runtime_error);
}

TEST(Protocol, ThreadCountDoesNotChangeRounds) {
    const auto c = reference_experiment(noise::ScheduleKind::random_walk, 7);
    const auto e = load_experiment(c);
    Rng rng(7);
    const Schedule s = make_schedule(20000, 0.9, 1, 1, rng);
    const rounds::ComputationRoundSpec spec{c.input, rounds::DecisionTable::indicator(c.accept_output)};
    const auto one = run_schedule(s, e.context, spec, e.base_model, c.schedule, c.seed, 0, 1);
    const auto four = run_schedule(s, e.context, spec, e.base_model, c.schedule, c.seed, 0, 4);
    ASSERT_EQ(one.size(), four.size());
    int failures = 0;
    for (std::size_t i = 0; i < one.size(); ++i) {
        ASSERT_EQ(one[i].kind, four[i].kind);
        ASSERT_EQ(one[i].verdict, four[i].verdict);
        failures += one[i].failed_test();
    }
    EXPECT_GT(failures, 0);
}

TEST(Config, JsonRoundTripAndUnknownKey) {
    auto c = desk_config(3);
    c.groups = 2;
    const auto back = nlohmann::json(c).get<ExperimentConfig>();
    EXPECT_EQ(nlohmann::json(back), nlohmann::json(c));
    auto j = nlohmann::json(c);
    j["basket_sise"] = 10;
    EXPECT_THROW(j.get<ExperimentConfig>(), std::invalid_argument);
    j = nlohmann::json(c);
    j["tau"] = 1.5;
    EXPECT_THROW(j.get<ExperimentConfig>(), std::invalid_argument);
}

TEST(Report, CsvAndSvgAreDeterministic) {
    std::vector<double> phi;
    for (int i = 0; i < 5000; ++i) phi.push_back(0.1 + 0.1 * std::sin(i / 300.0));
    const std::vector<RoundRange> baskets = {{100, 900}};
    const auto mask = basket_mask(5000, baskets);
    std::ostringstream a, b;
    write_phi_csv(a, phi, 0, &mask);
    write_phi_csv(b, phi, 0, &mask);
    const std::string csv = a.str();
    EXPECT_EQ(csv, b.str());
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5001);
    EXPECT_EQ(csv.substr(0, 26), "round_index,phi,in_basket\n");
    const auto svg = render_pass_rate_svg(phi, 0, 0.15, baskets, "t");
    EXPECT_EQ(svg, render_pass_rate_svg(phi, 0, 0.15, baskets, "t"));
    EXPECT_NE(svg.find("<polyline"), std::string::npos);
}

TEST(Manifest, Fnv1aVectors) {
    EXPECT_EQ(hex64(fnv1a64("", 0)), "cbf29ce484222325");
    EXPECT_EQ(hex64(fnv1a64("a", 1)), "af63dc4c8601ec8c");
    EXPECT_EQ(hex64(fnv1a64("foobar", 6)), "85944171f73967e8");
}

}  // namespace
