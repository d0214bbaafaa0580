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


#ifndef VBEM_MITIGATE_PROTOCOL_HPP
#define VBEM_MITIGATE_PROTOCOL_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "vbem/estimate/minimize.hpp"
#include "vbem/mitigate/analysis.hpp"
#include "vbem/mitigate/schedule.hpp"
#include "vbem/noise/calibrated.hpp"
#include "vbem/noise/schedule.hpp"
#include "vbem/pattern/cnot15.hpp"
#include "vbem/pattern/graph.hpp"
#include "vbem/rng.hpp"
#include "vbem/rounds/rounds.hpp"
#include "vbem/rounds/transcript_io.hpp"

namespace vbem::mitigate {

inline constexpr std::uint64_t kRoundDomain = 0x726f756e64;       // "round"
inline constexpr std::uint64_t kScheduleDomain = 0x736368656475;  // "schedu"

/// Everything needed to run or re-analyse one experiment. Path fields
/// accept "builtin:<name>" or a file path relative to `base_dir`.
struct ExperimentConfig {
    std::string pattern = "builtin:cnot15";
    std::string colouring = "builtin:cnot15";
    std::string coupling_map = "builtin:heavy_hex_127";
    std::string noise_model = "builtin:calibrated";
    noise::NoiseSchedule schedule;
    double eps_target = 0.05;
    std::optional<std::int64_t> basket_size;  // N; estimated from eps_target when absent
    std::int64_t total_rounds = 100000;       // N'
    std::optional<double> tau;
    std::int64_t window = 1000;  // T
    double p_tilde = 0.15;
    int groups = 1;
    std::uint64_t seed = 1;
    std::string output_dir;
    std::vector<int> input = {1, 1};
    std::vector<int> accept_output = {1, 0};  // q(o) = 1 exactly for this output
    double p = 0;
    int max_repetitions = 5;
    int threads = 1;
    std::filesystem::path base_dir;

    void validate() const {
        if (!(eps_target > 0 && eps_target < 0.5)) throw std::invalid_argument("eps_target must lie in (0, 1/2)");
        if (basket_size && *basket_size < 1) throw std::invalid_argument("basket_size must be positive");
        if (total_rounds < 1) throw std::invalid_argument("total_rounds must be positive");
        if (tau && !(*tau > 0 && *tau < 1)) throw std::invalid_argument("tau must lie in (0, 1)");
        if (window < 2) throw std::invalid_argument("window must be at least 2");
        if (!(p_tilde >= 0 && p_tilde < 1)) throw std::invalid_argument("p_tilde must lie in [0, 1)");
        if (groups < 1) throw std::invalid_argument("groups must be positive");
        if (max_repetitions < 1) throw std::invalid_argument("max_repetitions must be positive");
        if (threads < 1) throw std::invalid_argument("threads must be positive");
        if (!(p >= 0 && p < 0.5)) throw std::invalid_argument("p must lie in [0, 1/2)");
        schedule.validate();
    }
};

inline void to_json(nlohmann::json &j, const ExperimentConfig &c) {
    j = nlohmann::json{{"pattern", c.pattern},
                       {"colouring", c.colouring},
                       {"coupling_map", c.coupling_map},
                       {"noise_model", c.noise_model},
                       {"schedule", c.schedule},
                       {"eps_target", c.eps_target},
                       {"total_rounds", c.total_rounds},
                       {"window", c.window},
                       {"p_tilde", c.p_tilde},
                       {"groups", c.groups},
                       {"seed", c.seed},
                       {"output_dir", c.output_dir},
                       {"input", c.input},
                       {"accept_output", c.accept_output},
                       {"p", c.p},
                       {"max_repetitions", c.max_repetitions},
                       {"threads", c.threads}};
    j["basket_size"] = c.basket_size ? nlohmann::json(*c.basket_size) : nlohmann::json(nullptr);
    j["tau"] = c.tau ? nlohmann::json(*c.tau) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json &j, ExperimentConfig &c) {
    static const std::vector<std::string> known = {
        "pattern", "colouring", "coupling_map", "noise_model", "schedule",        "eps_target",
        "basket_size", "total_rounds", "tau", "window",       "p_tilde",         "groups",
        "seed",    "output_dir", "input", "accept_output", "p", "max_repetitions", "threads"};
    for (const auto &[key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("unknown experiment config key '" + key + "'");
        }
    }
    ExperimentConfig d;
    c.pattern = j.value("pattern", d.pattern);
    c.colouring = j.value("colouring", d.colouring);
    c.coupling_map = j.value("coupling_map", d.coupling_map);
    c.noise_model = j.value("noise_model", d.noise_model);
    c.seed = j.value("seed", d.seed);
    if (j.contains("schedule")) {
        auto block = j.at("schedule");
        if (!block.contains("seed")) {
            block["seed"] = c.seed;
        }
        c.schedule = block.get<noise::NoiseSchedule>();
    } else {
        c.schedule.seed = c.seed;
    }
    c.eps_target = j.value("eps_target", d.eps_target);
    if (j.contains("basket_size") && !j.at("basket_size").is_null()) {
        c.basket_size = j.at("basket_size").get<std::int64_t>();
    }
    c.total_rounds = j.value("total_rounds", d.total_rounds);
    if (j.contains("tau") && !j.at("tau").is_null()) {
        c.tau = j.at("tau").get<double>();
    }
    c.window = j.value("window", d.window);
    c.p_tilde = j.value("p_tilde", d.p_tilde);
    c.groups = j.value("groups", d.groups);
    c.output_dir = j.value("output_dir", d.output_dir);
    c.input = j.value("input", d.input);
    c.accept_output = j.value("accept_output", d.accept_output);
    c.p = j.value("p", d.p);
    c.max_repetitions = j.value("max_repetitions", d.max_repetitions);
    c.threads = j.value("threads", d.threads);
    c.validate();
}

inline nlohmann::json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::runtime_error("malformed JSON in " + path.string() + ": " + e.what());
    }
}

inline ExperimentConfig load_config(const std::filesystem::path &path) {
    ExperimentConfig c = read_json_file(path).get<ExperimentConfig>();
    c.base_dir = path.parent_path();
    return c;
}

/// Inputs resolved from an experiment config.
struct LoadedExperiment {
    std::shared_ptr<const rounds::RoundContext> context;
    pattern::CouplingMap coupling;
    std::vector<int> embedding;
    sim::NoiseModel base_model;
};

namespace detail {
inline bool is_builtin(const std::string &ref, const char *name) {
    return ref == std::string("builtin:") + name;
}
inline std::filesystem::path resolve(const ExperimentConfig &c, const std::string &ref) {
    std::filesystem::path p(ref);
    return p.is_absolute() ? p : c.base_dir / p;
}
}  // namespace detail

inline LoadedExperiment load_experiment(const ExperimentConfig &c) {
    LoadedExperiment out;
    pattern::MeasurementPattern pat;
    if (detail::is_builtin(c.pattern, "cnot15")) {
        pat = pattern::cnot15().pattern;
    } else {
        pat = read_json_file(detail::resolve(c, c.pattern)).get<pattern::MeasurementPattern>();
    }
    pattern::KColouring colouring;
    if (detail::is_builtin(c.colouring, "cnot15")) {
        colouring = pattern::cnot15().colouring;
    } else {
        colouring = read_json_file(detail::resolve(c, c.colouring)).get<pattern::KColouring>();
    }
    out.context = std::make_shared<const rounds::RoundContext>(std::move(pat), std::move(colouring));
    if (c.input.size() != out.context->pattern().inputs.size()) {
        throw std::invalid_argument("config input has " + std::to_string(c.input.size()) + " bits for " +
                                    std::to_string(out.context->pattern().inputs.size()) + " inputs");
    }
    if (c.accept_output.size() != out.context->pattern().outputs.size()) {
        throw std::invalid_argument("accept_output length does not match the pattern outputs");
    }
    if (detail::is_builtin(c.coupling_map, "heavy_hex_127")) {
        out.coupling = pattern::heavy_hex_127();
    } else if (!c.coupling_map.empty()) {
        out.coupling = read_json_file(detail::resolve(c, c.coupling_map)).get<pattern::CouplingMap>();
    }
    if (!c.coupling_map.empty()) {
        auto mapping = pattern::find_embedding(out.context->graph(), out.coupling);
        if (!mapping) {
            throw std::invalid_argument("pattern graph does not embed into the coupling map");
        }
        out.embedding = *mapping;
    }
    if (detail::is_builtin(c.noise_model, "calibrated")) {
        out.base_model = noise::calibrated_base_model();
    } else if (detail::is_builtin(c.noise_model, "noiseless")) {
        out.base_model = {};
    } else {
        out.base_model = read_json_file(detail::resolve(c, c.noise_model)).get<sim::NoiseModel>();
    }
    return out;
}

using TranscriptSink = std::function<void(const rounds::RoundTranscript &)>;

/// Simulates every round of a schedule. Round i has global index
/// offset + i, its own random stream and the noise level of that index, so
/// results do not depend on the thread count. `sink` sees transcripts in
/// round order.
inline std::vector<RoundSummary> run_schedule(const Schedule &schedule,
                                              const std::shared_ptr<const rounds::RoundContext> &ctx,
                                              const rounds::ComputationRoundSpec &spec,
                                              const sim::NoiseModel &base, const noise::NoiseSchedule &noise,
                                              std::uint64_t master_seed, std::int64_t offset = 0, int threads = 1,
                                              const TranscriptSink &sink = {}) {
    const std::int64_t n = schedule.total();
    std::vector<RoundSummary> out(n);
    constexpr std::int64_t kBlock = 8192;
    std::vector<rounds::RoundTranscript> block(sink ? kBlock : 0);
    auto simulate = [&](std::int64_t lo, std::int64_t hi, std::int64_t block_start) {
        rounds::RoundRunner runner(ctx);
        noise::NoiseWalk walk(noise);
        for (std::int64_t i = lo; i < hi; ++i) {
            const std::int64_t global = offset + i;
            Rng rng = child_stream(master_seed, kRoundDomain, static_cast<std::uint64_t>(global));
            const sim::NoiseModel model = noise::scale_model(base, walk.at(global), noise);
            rounds::RoundTranscript t = schedule.kinds[i] == rounds::RoundKind::test
                                            ? runner.test(model, rng)
                                            : runner.computation(spec, model, rng);
            t.round_index = global;
            out[i] = summarize(t);
            if (sink) {
                block[i - block_start] = std::move(t);
            }
        }
    };
    for (std::int64_t start = 0; start < n; start += kBlock) {
        const std::int64_t stop = std::min(n, start + kBlock);
        if (threads <= 1) {
            simulate(start, stop, start);
        } else {
            std::vector<std::thread> pool;
            const std::int64_t chunk = (stop - start + threads - 1) / threads;
            for (int w = 0; w < threads; ++w) {
                const std::int64_t lo = start + w * chunk;
                const std::int64_t hi = std::min(stop, lo + chunk);
                if (lo < hi) pool.emplace_back(simulate, lo, hi, start);
            }
            for (auto &t : pool) t.join();
        }
        if (sink) {
            for (std::int64_t i = start; i < stop; ++i) sink(block[i - start]);
        }
    }
    return out;
}

enum class Verdict { true_, false_, abort };

inline const char *verdict_name(Verdict v) {
    switch (v) {
        case Verdict::true_: return "True";
        case Verdict::false_: return "False";
        case Verdict::abort: return "Abort";
    }
    return "?";
}

/// Per-pass record for the audit trail.
struct PassRecord {
    int repetition = 0;
    std::int64_t offset = 0;
    std::int64_t tests = 0;
    std::int64_t failed_tests = 0;
    std::vector<Basket> baskets;
};

struct ProtocolOutcome {
    Verdict status = Verdict::abort;
    std::string reason;  // no-baskets | estimation-infeasible | repetition-cap
    double confidence = 0;
    double p0 = 0.5;
    double p1 = 0.5;
    std::int64_t basket_size = 0;  // N
    double tau = 0;
    estimate::EstimationResult estimation;
    std::vector<PassRecord> passes;

    std::size_t baskets_found() const {
        std::size_t c = 0;
        for (const auto &p : passes) c += p.baskets.size();
        return c;
    }
};

/// Rounds of one pass, from simulation or from stored transcripts.
struct PassData {
    std::vector<RoundSummary> rounds;
};

/// Called with (repetition, schedule) and returns that pass's rounds, or
/// nothing when no further pass is available.
using RoundSource = std::function<std::optional<PassData>(int, const Schedule &)>;

/// Sees each analysed pass: (repetition, schedule, rolling failure rate).
using PassObserver = std::function<void(int, const Schedule &, const PhiSeries &)>;

/// Resource estimation for N, tau and Phi.
inline estimate::EstimationResult plan_protocol(const ExperimentConfig &c, int k,
                                                const estimate::MinimizeOptions &base = {}) {
    const estimate::BoundInputs in{k, c.p, c.p_tilde};
    estimate::MinimizeOptions opt = base;
    if (c.tau) opt.fixed_tau = *c.tau;
    if (c.basket_size) {
        return estimate::minimize_eps_given_n(in, *c.basket_size, opt);
    }
    return estimate::minimize_n_given_eps(in, c.eps_target, opt);
}

/// Full basketing run: estimate, schedule, simulate or replay, baskets,
/// certification and Bayesian combination, repeated up to the pass cap.
inline ProtocolOutcome drive_protocol(const ExperimentConfig &c, const rounds::RoundContext &ctx,
                                      const RoundSource &source, const PassObserver &observer = {}) {
    c.validate();
    ProtocolOutcome out;
    const int k = static_cast<int>(ctx.colouring().classes.size());
    out.estimation = plan_protocol(c, k);
    // With N and tau both fixed the estimate is informational; each basket
    // is still certified on its own length.
    if (!out.estimation.ok() && !(c.basket_size && c.tau)) {
        out.reason = "estimation-infeasible";
        return out;
    }
    out.basket_size = c.basket_size ? *c.basket_size : out.estimation.n;
    out.tau = c.tau ? *c.tau : out.estimation.tau;
    const estimate::BoundInputs certify_inputs{k, c.p, c.p_tilde};

    Posterior posterior;
    for (int rep = 0; rep < c.max_repetitions; ++rep) {
        Rng schedule_rng = child_stream(c.seed, kScheduleDomain, static_cast<std::uint64_t>(rep));
        const Schedule schedule = make_schedule(c.total_rounds, out.tau, c.groups, out.basket_size, schedule_rng);
        auto data = source(rep, schedule);
        if (!data) {
            break;
        }
        if (static_cast<std::int64_t>(data->rounds.size()) != schedule.total()) {
            throw std::runtime_error("round source returned " + std::to_string(data->rounds.size()) +
                                     " rounds for a schedule of " + std::to_string(schedule.total()));
        }
        PassRecord pass;
        pass.repetition = rep;
        pass.offset = static_cast<std::int64_t>(rep) * c.total_rounds;
        for (const auto &r : data->rounds) {
            if (r.kind == rounds::RoundKind::test) {
                ++pass.tests;
                pass.failed_tests += r.failed_test();
            }
        }
        const PhiSeries phi = rolling_failure_rate(data->rounds, c.window, schedule.groups);
        if (observer) observer(rep, schedule, phi);
        const auto ranges = find_baskets(phi.phi, c.p_tilde, out.basket_size, schedule.groups);
        if (ranges.empty() && rep == 0) {
            out.passes.push_back(std::move(pass));
            out.reason = "no-baskets";
            return out;
        }
        bool done = false;
        for (const auto &[group, range] : ranges) {
            Basket b = measure_basket(data->rounds, group, range);
            b.vote = basket_vote(data->rounds, range);
            if (!done) {
                basket_certify(b, certify_inputs);
                if (b.used) {
                    posterior = bayes_update(posterior, b.q0, b.q1);
                    done = std::max(posterior.p0(), posterior.p1()) >= 1 - c.eps_target;
                }
            } else {
                b.discard_reason = "not needed";
            }
            pass.baskets.push_back(std::move(b));
        }
        out.passes.push_back(std::move(pass));
        out.p0 = posterior.p0();
        out.p1 = posterior.p1();
        if (done) {
            out.status = out.p1 > out.p0 ? Verdict::true_ : Verdict::false_;
            out.confidence = std::max(out.p0, out.p1);
            return out;
        }
    }
    out.reason = "repetition-cap";
    return out;
}

/// Source that simulates each pass; repetition r uses global round
/// indices starting at r * total_rounds so the noise walk continues.
inline RoundSource simulation_source(const ExperimentConfig &c, const LoadedExperiment &e,
                                     const TranscriptSink &sink = {}) {
    rounds::ComputationRoundSpec spec{c.input, rounds::DecisionTable::indicator(c.accept_output)};
    return [c, e, spec, sink](int rep, const Schedule &schedule) -> std::optional<PassData> {
        PassData d;
        d.rounds = run_schedule(schedule, e.context, spec, e.base_model, c.schedule, c.seed,
                                static_cast<std::int64_t>(rep) * c.total_rounds, c.threads, sink);
        return d;
    };
}

/// A stored round reduced to what the analysis reads.
struct StoredRound {
    std::int64_t round_index = 0;
    RoundSummary summary;
};

inline std::vector<StoredRound> to_stored(const std::vector<rounds::RoundTranscript> &transcripts) {
    std::vector<StoredRound> out;
    out.reserve(transcripts.size());
    for (const auto &t : transcripts) out.push_back({t.round_index, summarize(t)});
    return out;
}

/// Streams a JSONL transcript file; memory is O(rounds) small records.
inline std::vector<StoredRound> read_stored_rounds(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::vector<StoredRound> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto t = nlohmann::json::parse(line).get<rounds::RoundTranscript>();
            out.push_back({t.round_index, summarize(t)});
        } catch (const std::exception &e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

/// Source that replays stored rounds, split into passes by round index.
/// Pass r must hold exactly the indices [r * N', (r + 1) * N') in order.
inline RoundSource replay_source(const ExperimentConfig &c, std::vector<StoredRound> stored) {
    auto shared = std::make_shared<std::vector<StoredRound>>(std::move(stored));
    const std::int64_t total = c.total_rounds;
    return [shared, total](int rep, const Schedule &schedule) -> std::optional<PassData> {
        const std::int64_t begin = static_cast<std::int64_t>(rep) * total;
        PassData d;
        for (const auto &r : *shared) {
            if (r.round_index < begin || r.round_index >= begin + total) continue;
            const std::int64_t local = r.round_index - begin;
            if (local != static_cast<std::int64_t>(d.rounds.size())) {
                throw std::runtime_error("stored rounds are not contiguous at index " +
                                         std::to_string(r.round_index));
            }
            if (r.summary.kind != schedule.kinds[local]) {
                throw std::runtime_error("stored round " + std::to_string(r.round_index) +
                                         " does not match the regenerated schedule");
            }
            d.rounds.push_back(r.summary);
        }
        if (d.rounds.empty()) {
            return std::nullopt;
        }
        return d;
    };
}

inline RoundSource replay_source(const ExperimentConfig &c, const std::vector<rounds::RoundTranscript> &transcripts) {
    return replay_source(c, to_stored(transcripts));
}

/// The 15-qubit CNOT experiment: N = 10000 baskets, N' = 100000 rounds,
/// tau = 0.9, T = 1000, p~ = 0.15, calibrated noise on heavy-hex. The
/// noise walk shares the master seed.
inline ExperimentConfig reference_experiment(noise::ScheduleKind kind, std::uint64_t seed) {
    ExperimentConfig c;
    c.basket_size = 10000;
    c.total_rounds = 100000;
    c.tau = 0.9;
    c.window = 1000;
    c.p_tilde = 0.15;
    c.seed = seed;
    c.schedule.kind = kind;
    c.schedule.seed = seed;
    return c;
}

inline void to_json(nlohmann::json &j, const PassRecord &p) {
    j = nlohmann::json{{"repetition", p.repetition},
                       {"offset", p.offset},
                       {"tests", p.tests},
                       {"failed_tests", p.failed_tests},
                       {"baskets", p.baskets}};
}

inline void to_json(nlohmann::json &j, const ProtocolOutcome &o) {
    j = nlohmann::json{{"status", verdict_name(o.status)},
                       {"p0", o.p0},
                       {"p1", o.p1},
                       {"basket_size", o.basket_size},
                       {"tau", o.tau},
                       {"estimation", o.estimation},
                       {"passes", o.passes}};
    if (o.status == Verdict::abort) {
        j["reason"] = o.reason;
    } else {
        j["confidence"] = o.confidence;
    }
}

}  // namespace vbem::mitigate

#endif
