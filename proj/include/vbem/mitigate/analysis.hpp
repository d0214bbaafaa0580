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


#ifndef VBEM_MITIGATE_ANALYSIS_HPP
#define VBEM_MITIGATE_ANALYSIS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vbem/estimate/minimize.hpp"
#include "vbem/mitigate/schedule.hpp"
#include "vbem/rounds/rounds.hpp"

namespace vbem::mitigate {

/// What the analysis needs from one round.
struct RoundSummary {
    rounds::RoundKind kind = rounds::RoundKind::test;
    int verdict = 0;  // Q for computation rounds, 1 = Pass for test rounds
    bool discarded = false;

    bool failed_test() const {
        return kind == rounds::RoundKind::test && (discarded || verdict == 0);
    }
    bool usable_computation() const {
        return kind == rounds::RoundKind::computation && !discarded;
    }
};

inline RoundSummary summarize(const rounds::RoundTranscript &t) {
    return {t.kind, t.verdict, t.discarded};
}

struct PhiSeries {
    std::vector<double> phi;
    std::vector<std::uint8_t> empty_window;  // no test round in the window; phi set to 0
};

/// phi_i = failed / total test rounds in [i - T/2, i + T/2], clipped to the
/// round's own group.
inline PhiSeries rolling_failure_rate(const std::vector<RoundSummary> &rounds, std::int64_t window,
                                      const std::vector<RoundRange> &groups) {
    if (window < 2) {
        throw std::invalid_argument("window must be at least 2");
    }
    const auto n = static_cast<std::int64_t>(rounds.size());
    std::vector<std::int64_t> tests(n + 1, 0);
    std::vector<std::int64_t> fails(n + 1, 0);
    for (std::int64_t i = 0; i < n; ++i) {
        tests[i + 1] = tests[i] + (rounds[i].kind == rounds::RoundKind::test);
        fails[i + 1] = fails[i] + rounds[i].failed_test();
    }
    PhiSeries out;
    out.phi.assign(n, 0.0);
    out.empty_window.assign(n, 0);
    const std::int64_t half = window / 2;
    for (const RoundRange &g : groups) {
        if (g.begin < 0 || g.end > n || g.begin > g.end) {
            throw std::invalid_argument("group range outside the round stream");
        }
        for (std::int64_t i = g.begin; i < g.end; ++i) {
            const std::int64_t lo = std::max(i - half, g.begin);
            const std::int64_t hi = std::min(i + half, g.end - 1);
            const std::int64_t t = tests[hi + 1] - tests[lo];
            if (t == 0) {
                out.empty_window[i] = 1;
            } else {
                out.phi[i] = static_cast<double>(fails[hi + 1] - fails[lo]) / static_cast<double>(t);
            }
        }
    }
    return out;
}

/// Maximal runs with phi <= p_tilde inside one group, kept when 2 |B| >= N.
inline std::vector<std::pair<int, RoundRange>> find_baskets(const std::vector<double> &phi, double p_tilde,
                                                            std::int64_t basket_size,
                                                            const std::vector<RoundRange> &groups) {
    std::vector<std::pair<int, RoundRange>> out;
    for (int gi = 0; gi < static_cast<int>(groups.size()); ++gi) {
        const RoundRange &g = groups[gi];
        std::int64_t start = -1;
        for (std::int64_t i = g.begin; i <= g.end; ++i) {
            const bool low = i < g.end && phi.at(i) <= p_tilde;
            if (low && start < 0) {
                start = i;
            } else if (!low && start >= 0) {
                if (2 * (i - start) >= basket_size) {
                    out.push_back({gi, {start, i}});
                }
                start = -1;
            }
        }
    }
    return out;
}

/// Majority vote over usable computation rounds. Empty on a tie or when
/// the basket holds no computation round.
struct Vote {
    std::int64_t computations = 0;
    std::int64_t ones = 0;
    std::optional<int> outcome;
    std::string discard_reason;
};

inline Vote basket_vote(const std::vector<RoundSummary> &rounds, RoundRange range) {
    Vote v;
    for (std::int64_t i = range.begin; i < range.end; ++i) {
        if (rounds[i].usable_computation()) {
            ++v.computations;
            v.ones += rounds[i].verdict & 1;
        }
    }
    if (v.computations == 0) {
        v.discard_reason = "no computation rounds";
    } else if (2 * v.ones > v.computations) {
        v.outcome = 1;
    } else if (2 * v.ones < v.computations) {
        v.outcome = 0;
    } else {
        v.discard_reason = "tied vote";
    }
    return v;
}

struct Basket {
    int group = 0;
    RoundRange range;
    std::int64_t tests = 0;
    std::int64_t failed_tests = 0;
    double tau = 0;
    double failure_fraction = 0;
    Vote vote;
    std::optional<estimate::EstimationResult> certificate;
    bool used = false;
    std::string discard_reason;
    double q0 = 0.5;
    double q1 = 0.5;
};

inline Basket measure_basket(const std::vector<RoundSummary> &rounds, int group, RoundRange range) {
    Basket b;
    b.group = group;
    b.range = range;
    for (std::int64_t i = range.begin; i < range.end; ++i) {
        if (rounds[i].kind == rounds::RoundKind::test) {
            ++b.tests;
            b.failed_tests += rounds[i].failed_test();
        }
    }
    b.tau = static_cast<double>(b.tests) / static_cast<double>(range.size());
    b.failure_fraction = b.tests ? static_cast<double>(b.failed_tests) / static_cast<double>(b.tests) : 1.0;
    return b;
}

/// Certifies a voted basket with tau fixed to its own test fraction.
/// Sets q on success, a discard reason otherwise.
inline void basket_certify(Basket &b, const estimate::BoundInputs &in, const estimate::MinimizeOptions &base = {}) {
    if (!b.vote.outcome) {
        b.discard_reason = b.vote.discard_reason;
        return;
    }
    if (!(b.tau > 0 && b.tau < 1)) {
        b.discard_reason = "basket test fraction outside (0, 1)";
        return;
    }
    estimate::MinimizeOptions opt = base;
    opt.fixed_tau = b.tau;
    b.certificate = estimate::minimize_eps_given_n(in, b.range.size(), opt);
    const auto &c = *b.certificate;
    if (!c.ok()) {
        b.discard_reason = "estimation aborted: " + c.reason;
        return;
    }
    if (!(c.eps_max < 0.5)) {
        b.discard_reason = "eps >= 1/2";
        return;
    }
    if (!(b.failure_fraction < c.phi)) {
        b.discard_reason = "failure fraction not below Phi";
        return;
    }
    b.used = true;
    const double eps = c.eps_max;
    b.q1 = *b.vote.outcome == 1 ? 1 - eps : eps;
    b.q0 = 1 - b.q1;
}

/// Two-outcome belief stored as log-odds log(p1 / p0).
class Posterior {
   public:
    double p1() const {
        return 1 / (1 + std::exp(-log_odds_));
    }
    double p0() const {
        return 1 / (1 + std::exp(log_odds_));
    }
    double log_odds() const {
        return log_odds_;
    }
    int updates() const {
        return updates_;
    }

   private:
    friend Posterior bayes_update(const Posterior &, double, double);
    double log_odds_ = 0;
    int updates_ = 0;
};

/// p_i <- q_i p_i / (q_i p_i + (1 - q_i)(1 - p_i)), which for two outcomes
/// adds log(q1 / q0) to the log-odds.
inline Posterior bayes_update(const Posterior &prior, double q0, double q1) {
    if (!(q0 > 0 && q0 < 1 && q1 > 0 && q1 < 1)) {
        throw std::invalid_argument("q values must lie strictly inside (0, 1)");
    }
    if (std::abs(q0 + q1 - 1) > 1e-12) {
        throw std::invalid_argument("q values must sum to 1");
    }
    Posterior next = prior;
    next.log_odds_ += std::log(q1) - std::log(q0);
    ++next.updates_;
    return next;
}

inline void to_json(nlohmann::json &j, const Basket &b) {
    j = nlohmann::json{{"group", b.group},
                       {"begin", b.range.begin},
                       {"end", b.range.end},
                       {"size", b.range.size()},
                       {"tests", b.tests},
                       {"failed_tests", b.failed_tests},
                       {"tau", b.tau},
                       {"failure_fraction", b.failure_fraction},
                       {"computations", b.vote.computations},
                       {"ones", b.vote.ones},
                       {"used", b.used}};
    j["vote"] = b.vote.outcome ? nlohmann::json(*b.vote.outcome) : nlohmann::json(nullptr);
    if (b.certificate) {
        j["certificate"] = *b.certificate;
    }
    if (b.used) {
        j["q"] = {b.q0, b.q1};
    } else {
        j["discard_reason"] = b.discard_reason;
    }
}

}  // namespace vbem::mitigate

#endif
