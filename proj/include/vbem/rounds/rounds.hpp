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


#ifndef VBEM_ROUNDS_ROUNDS_HPP
#define VBEM_ROUNDS_ROUNDS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vbem/angle.hpp"
#include "vbem/pattern/compile.hpp"
#include "vbem/pattern/graph.hpp"
#include "vbem/pattern/pattern.hpp"
#include "vbem/rng.hpp"
#include "vbem/rounds/executor.hpp"
#include "vbem/sim/noise_model.hpp"

namespace vbem::rounds {

inline constexpr int kUndefined = -1;

/// Decision q over output bitstrings. Entry i is q(o) where o read as a
/// binary number with the first output as its most significant bit.
struct DecisionTable {
    std::vector<int> table;

    int operator()(const std::vector<int> &o) const {
        std::size_t index = 0;
        for (int bit : o) {
            index = (index << 1) | static_cast<std::size_t>(bit & 1);
        }
        return table.at(index);
    }

    /// q(target) = 1 and 0 elsewhere.
    static DecisionTable indicator(const std::vector<int> &target) {
        DecisionTable q;
        q.table.assign(std::size_t{1} << target.size(), 0);
        std::size_t index = 0;
        for (int bit : target) {
            index = (index << 1) | static_cast<std::size_t>(bit & 1);
        }
        q.table[index] = 1;
        return q;
    }
};

struct ComputationRoundSpec {
    std::vector<int> input;  // one bit per input vertex, in input order
    DecisionTable decision;
};

enum class RoundKind { computation, test };

inline const char *kind_name(RoundKind k) {
    return k == RoundKind::computation ? "computation" : "test";
}

/// Every random choice and reported outcome of one round. Entries that
/// do not apply to a vertex hold kUndefined.
struct RoundTranscript {
    std::int64_t round_index = 0;
    RoundKind kind = RoundKind::computation;
    int colour = kUndefined;
    std::vector<int> input;  // computation rounds only
    std::vector<int> theta;
    std::vector<int> r;
    std::vector<int> d;
    std::vector<int> delta;
    std::vector<int> b;
    /// Decision bit Q for computation rounds, 1 for Pass and 0 for Fail on
    /// test rounds.
    int verdict = 0;
    bool discarded = false;

    bool passed() const {
        return kind == RoundKind::test && verdict == 1 && !discarded;
    }
};

/// Shared, immutable round machinery for one pattern.
class RoundContext {
   public:
    RoundContext(pattern::MeasurementPattern p, pattern::KColouring colouring)
        : pattern_(std::move(p)), colouring_(std::move(colouring)) {
        auto violations = pattern::validate_pattern(pattern_);
        if (!violations.empty()) {
            throw std::invalid_argument("invalid pattern: " + violations.front());
        }
        graph_ = pattern_.graph();
        auto colour_problems = colouring_.violations(graph_);
        if (!colour_problems.empty()) {
            throw std::invalid_argument("invalid colouring: " + colour_problems.front());
        }
        flow_ = std::make_shared<const pattern::FlowStructure>(pattern_);
        colour_of_ = colouring_.colour_map(pattern_.num_vertices);
        input_slot_.assign(pattern_.num_vertices, -1);
        for (std::size_t i = 0; i < pattern_.inputs.size(); ++i) {
            input_slot_[pattern_.inputs[i]] = static_cast<int>(i);
        }
    }

    const pattern::MeasurementPattern &pattern() const {
        return pattern_;
    }
    const pattern::KColouring &colouring() const {
        return colouring_;
    }
    const pattern::Graph &graph() const {
        return graph_;
    }
    const std::shared_ptr<const pattern::FlowStructure> &flow() const {
        return flow_;
    }
    int input_slot(int v) const {
        return input_slot_[v];
    }
    int colour_of(int v) const {
        return colour_of_[v];
    }

   private:
    pattern::MeasurementPattern pattern_;
    pattern::KColouring colouring_;
    pattern::Graph graph_;
    std::shared_ptr<const pattern::FlowStructure> flow_;
    std::vector<int> colour_of_;
    std::vector<int> input_slot_;
};

/// Output bits o = decoded outcomes on the output vertices, in order.
inline std::vector<int> output_bits(const pattern::MeasurementPattern &p, const RoundTranscript &t) {
    std::vector<int> o;
    for (int v : p.outputs) {
        o.push_back(t.b.at(v) ^ t.r.at(v));
    }
    return o;
}

/// Pass iff every trap v in the chosen colour has b_v = r_v XOR the
/// parity of its neighbours' dummy bits.
inline bool evaluate_test_predicate(const RoundTranscript &t, const pattern::Graph &graph,
                                    const pattern::KColouring &colouring) {
    if (t.kind != RoundKind::test) {
        throw std::invalid_argument("predicate applies to test rounds only");
    }
    if (t.colour < 0 || t.colour >= static_cast<int>(colouring.classes.size())) {
        throw std::invalid_argument("test transcript has no valid colour");
    }
    const auto n = static_cast<std::size_t>(graph.num_vertices());
    if (t.b.size() != n || t.r.size() != n || t.d.size() != n) {
        throw std::invalid_argument("test transcript is incomplete");
    }
    for (int v : colouring.classes[t.colour]) {
        if (t.b[v] == kUndefined || t.r[v] == kUndefined) {
            throw std::invalid_argument("trap " + std::to_string(v) + " lacks its outcome or pad");
        }
        int expected = t.r[v];
        for (int w : graph.neighbours(v)) {
            if (t.d[w] == kUndefined) {
                throw std::invalid_argument("neighbour " + std::to_string(w) + " of trap " + std::to_string(v) +
                                            " lacks its dummy bit");
            }
            expected ^= t.d[w];
        }
        if (t.b[v] != expected) {
            return false;
        }
    }
    return true;
}

/// Runs rounds for one pattern with a reusable simulator workspace.
/// Not thread-safe; use one runner per thread.
class RoundRunner {
   public:
    explicit RoundRunner(std::shared_ptr<const RoundContext> context)
        : ctx_(std::move(context)),
          engine_(ctx_->pattern().num_vertices, ctx_->pattern().edges, ctx_->pattern().flow_order) {}

    const RoundContext &context() const {
        return *ctx_;
    }

    RoundTranscript computation(const ComputationRoundSpec &spec, const sim::NoiseModel &model, Rng &rng) {
        const auto &p = ctx_->pattern();
        if (spec.input.size() != p.inputs.size()) {
            throw std::invalid_argument("computation input has " + std::to_string(spec.input.size()) +
                                        " bits for " + std::to_string(p.inputs.size()) + " input vertices");
        }
        if (spec.decision.table.size() != (std::size_t{1} << p.outputs.size())) {
            throw std::invalid_argument("decision table does not cover every output bitstring");
        }
        const int n = p.num_vertices;
        RoundTranscript t;
        t.kind = RoundKind::computation;
        t.input = spec.input;
        t.theta.resize(n);
        t.r.resize(n);
        t.d.assign(n, kUndefined);
        std::vector<pattern::Preparation> preps(n);
        std::vector<pattern::MeasurementRule> rules(n);
        for (int v = 0; v < n; ++v) {
            t.theta[v] = static_cast<int>(uniform_below(rng, 8));
            t.r[v] = coin(rng) ? 1 : 0;
            const int slot = ctx_->input_slot(v);
            const int x = slot >= 0 ? (spec.input[slot] & 1) : 0;
            preps[v] = pattern::Preparation::plus(Angle(t.theta[v]));
            rules[v] = pattern::MeasurementRule::corrected(p.angle(v), Angle(t.theta[v] + 4 * t.r[v] + 4 * x), t.r[v]);
        }
        execute(t, std::move(preps), std::move(rules), model, rng);
        if (!t.discarded) {
            t.verdict = spec.decision(output_bits(p, t));
        }
        return t;
    }

    RoundTranscript test(const sim::NoiseModel &model, Rng &rng) {
        const auto &p = ctx_->pattern();
        const int n = p.num_vertices;
        RoundTranscript t;
        t.kind = RoundKind::test;
        t.colour = static_cast<int>(uniform_below(rng, ctx_->colouring().classes.size()));
        t.theta.assign(n, kUndefined);
        t.r.assign(n, kUndefined);
        t.d.assign(n, kUndefined);
        std::vector<pattern::Preparation> preps(n);
        std::vector<pattern::MeasurementRule> rules(n);
        for (int v = 0; v < n; ++v) {
            if (ctx_->colour_of(v) == t.colour) {
                t.theta[v] = static_cast<int>(uniform_below(rng, 8));
                t.r[v] = coin(rng) ? 1 : 0;
                preps[v] = pattern::Preparation::plus(Angle(t.theta[v]));
                rules[v] = pattern::MeasurementRule::fixed(Angle(t.theta[v] + 4 * t.r[v]), t.r[v]);
            } else {
                t.d[v] = coin(rng) ? 1 : 0;
                preps[v] = pattern::Preparation::basis_state(t.d[v]);
                rules[v] = pattern::MeasurementRule::fixed(Angle(static_cast<int>(uniform_below(rng, 8))));
            }
        }
        execute(t, std::move(preps), std::move(rules), model, rng);
        t.verdict = (!t.discarded && evaluate_test_predicate(t, ctx_->graph(), ctx_->colouring())) ? 1 : 0;
        return t;
    }

   private:
    void execute(RoundTranscript &t, std::vector<pattern::Preparation> preps,
                 std::vector<pattern::MeasurementRule> rules, const sim::NoiseModel &model, Rng &rng) {
        const auto program = pattern::compile_round(ctx_->pattern(), ctx_->flow(), std::move(preps), std::move(rules));
        const FaultPlan plan = sample_faults(program, model, rng);
        const int n = program.num_qubits;
        try {
            const ExecutionRecord rec = engine_.run(program, plan);
            t.delta.resize(n);
            t.b = rec.reported;
            for (int v = 0; v < n; ++v) {
                t.delta[v] = rec.delta[v].eighths();
            }
        } catch (const std::logic_error &) {
            // Zero-norm collapse: record the round as unusable.
            t.discarded = true;
            t.delta.assign(n, kUndefined);
            t.b.assign(n, kUndefined);
        }
    }

    std::shared_ptr<const RoundContext> ctx_;
    GraphStateExecutor engine_;
};

inline RoundTranscript run_computation_round(const std::shared_ptr<const RoundContext> &ctx,
                                             const ComputationRoundSpec &spec, const sim::NoiseModel &model,
                                             Rng &rng) {
    RoundRunner runner(ctx);
    return runner.computation(spec, model, rng);
}

inline RoundTranscript run_test_round(const std::shared_ptr<const RoundContext> &ctx, const sim::NoiseModel &model,
                                      Rng &rng) {
    RoundRunner runner(ctx);
    return runner.test(model, rng);
}

/// Checks delta = phi' + theta + r pi (+ x pi on inputs) against the
/// transcript's own decoded outcomes. Returns the first bad vertex or -1.
inline int check_computation_angles(const RoundContext &ctx, const RoundTranscript &t) {
    const auto &p = ctx.pattern();
    std::vector<int> decoded(p.num_vertices, -1);
    for (int v : p.flow_order) {
        const int slot = ctx.input_slot(v);
        const int x = slot >= 0 ? t.input.at(slot) : 0;
        const Angle expected =
            pattern::corrected_angle(p, *ctx.flow(), v, decoded) + Angle(t.theta[v] + 4 * t.r[v] + 4 * x);
        if (expected.eighths() != t.delta[v]) {
            return v;
        }
        decoded[v] = t.b[v] ^ t.r[v];
    }
    return -1;
}

namespace detail {
inline nlohmann::json nullable(const std::vector<int> &values) {
    auto out = nlohmann::json::array();
    for (int v : values) {
        out.push_back(v == kUndefined ? nlohmann::json(nullptr) : nlohmann::json(v));
    }
    return out;
}
inline std::vector<int> from_nullable(const nlohmann::json &j) {
    std::vector<int> out;
    for (const auto &v : j) {
        out.push_back(v.is_null() ? kUndefined : v.get<int>());
    }
    return out;
}
}  // namespace detail

inline void to_json(nlohmann::json &j, const RoundTranscript &t) {
    j = nlohmann::json::object();
    j["round_index"] = t.round_index;
    j["kind"] = kind_name(t.kind);
    if (t.kind == RoundKind::test) {
        j["colour"] = t.colour;
    } else {
        j["input"] = t.input;
    }
    j["theta"] = detail::nullable(t.theta);
    j["r"] = detail::nullable(t.r);
    j["d"] = detail::nullable(t.d);
    j["delta"] = detail::nullable(t.delta);
    j["b"] = detail::nullable(t.b);
    if (t.kind == RoundKind::test) {
        j["verdict"] = t.verdict ? "pass" : "fail";
    } else {
        j["verdict"] = t.verdict;
    }
    if (t.discarded) {
        j["discarded"] = true;
    }
}

inline void from_json(const nlohmann::json &j, RoundTranscript &t) {
    t.round_index = j.at("round_index").get<std::int64_t>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "test") {
        t.kind = RoundKind::test;
        t.colour = j.at("colour").get<int>();
        t.verdict = j.at("verdict").get<std::string>() == "pass" ? 1 : 0;
    } else if (kind == "computation") {
        t.kind = RoundKind::computation;
        t.colour = kUndefined;
        t.input = j.value("input", std::vector<int>{});
        t.verdict = j.at("verdict").get<int>();
    } else {
        throw std::invalid_argument("unknown round kind '" + kind + "'");
    }
    t.theta = detail::from_nullable(j.at("theta"));
    t.r = detail::from_nullable(j.at("r"));
    t.d = detail::from_nullable(j.at("d"));
    t.delta = detail::from_nullable(j.at("delta"));
    t.b = detail::from_nullable(j.at("b"));
    t.discarded = j.value("discarded", false);
}

}  // namespace vbem::rounds

#endif
