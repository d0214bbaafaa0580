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


// vbem: estimation, simulation, mitigation and reporting from the shell.
//
// Exit codes: 0 success, 2 protocol abort, 1 error. Aborts and errors end
// with one JSON line {"status": ..., "reason": ...} on stderr.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vbem/vbem.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vbem;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAbort = 2;
constexpr const char *kOutputEnv = "VBEM_OUTPUT_DIR";

/// Raised for a protocol-level abort; carries the machine-readable reason.
struct AbortError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int report_status(const char *status, const std::string &reason) {
    std::cerr << json{{"status", status}, {"reason", reason}}.dump() << '\n';
    return std::string(status) == "Abort" ? kExitAbort : kExitError;
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path &path, const json &j) {
    write_text(path, j.dump(2) + "\n");
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

/// --out, then the config's output_dir, then $VBEM_OUTPUT_DIR, then ./vbem-out.
fs::path choose_output_dir(const std::string &flag, const std::string &from_config = {}) {
    if (!flag.empty()) return flag;
    if (!from_config.empty()) return from_config;
    if (const char *env = std::getenv(kOutputEnv); env && *env) return env;
    return "vbem-out";
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
    int k = 2;
    double p = 0;
    double p_max = 0.15;
    std::optional<double> eps;
    std::optional<std::int64_t> n;
    std::optional<double> tau;
    std::string trace;
    bool json_output = false;
};

int cmd_estimate(const EstimateArgs &a) {
    const estimate::BoundInputs in{a.k, a.p, a.p_max};
    in.validate();
    estimate::MinimizeOptions opt;
    if (a.tau) opt.fixed_tau = *a.tau;
    std::ofstream trace;
    if (!a.trace.empty()) {
        trace.open(a.trace, std::ios::binary);
        if (!trace) throw std::runtime_error("cannot write " + a.trace);
        opt.trace = [&trace](const estimate::FreeParams &x, double log_eps) {
            trace << json{{"params", x}, {"log_eps", log_eps}}.dump() << '\n';
        };
    }
    const auto r = a.n ? estimate::minimize_eps_given_n(in, *a.n, opt)
                       : estimate::minimize_n_given_eps(in, *a.eps, opt);
    if (a.json_output) {
        std::cout << json(r).dump(2) << '\n';
    } else if (r.ok()) {
        std::cout << "status   Done\n"
                  << "n        " << r.n << '\n'
                  << "tau      " << fixed(r.tau, 4) << '\n'
                  << "t, d     " << r.t << ", " << r.d << '\n'
                  << "eps_max  " << fixed(r.eps_max, 6) << '\n'
                  << "eps_ver  " << fixed(r.eps_ver, 6) << '\n'
                  << "eps_rej  " << fixed(r.eps_rej, 6) << '\n'
                  << "Phi      " << fixed(r.phi, 6) << '\n';
    } else {
        std::cout << "status   Abort\nreason   " << r.reason << '\n';
    }
    return r.ok() ? kExitOk : report_status("Abort", r.reason);
}

// ---------------------------------------------------------------- run

/// Copy of the config with file references made absolute, so the snapshot
/// in a manifest can be replayed from any directory.
mitigate::ExperimentConfig snapshot_config(const mitigate::ExperimentConfig &c) {
    mitigate::ExperimentConfig s = c;
    for (std::string *ref : {&s.pattern, &s.colouring, &s.coupling_map, &s.noise_model}) {
        if (!ref->empty() && ref->rfind("builtin:", 0) != 0) {
            *ref = fs::absolute(mitigate::detail::resolve(c, *ref)).lexically_normal().string();
        }
    }
    s.output_dir.clear();
    s.base_dir.clear();
    return s;
}

std::map<std::string, std::string> input_digests(const mitigate::ExperimentConfig &c) {
    std::map<std::string, std::string> out;
    const std::pair<const char *, const std::string *> refs[] = {
        {"pattern", &c.pattern}, {"colouring", &c.colouring},
        {"coupling_map", &c.coupling_map}, {"noise_model", &c.noise_model}};
    for (const auto &[name, ref] : refs) {
        if (ref->empty()) continue;
        out[name] = ref->rfind("builtin:", 0) == 0 ? *ref : file_digest(mitigate::detail::resolve(c, *ref));
    }
    return out;
}

struct RunSummary {
    std::int64_t rounds = 0;
    std::int64_t tests = 0;
    std::int64_t failed_tests = 0;
    std::int64_t computations = 0;
    std::int64_t discarded = 0;

    double pass_rate() const {
        return tests ? 1.0 - static_cast<double>(failed_tests) / static_cast<double>(tests) : 1.0;
    }
};

struct RunResult {
    fs::path transcripts;
    RunSummary summary;
    mitigate::ProtocolOutcome outcome;
};

RunResult run_experiment(const mitigate::ExperimentConfig &c, const fs::path &out_dir, bool quiet = false) {
    const auto experiment = mitigate::load_experiment(c);
    fs::create_directories(out_dir);
    RunResult result;
    result.transcripts = out_dir / "transcripts.jsonl";
    {
        rounds::TranscriptWriter writer(result.transcripts);
        RunSummary &s = result.summary;
        auto sink = [&](const rounds::RoundTranscript &t) {
            writer.write(t);
            ++s.rounds;
            s.discarded += t.discarded;
            if (t.kind == rounds::RoundKind::test) {
                ++s.tests;
                s.failed_tests += !t.passed();
            } else {
                ++s.computations;
            }
        };
        result.outcome = mitigate::drive_protocol(c, *experiment.context,
                                                  mitigate::simulation_source(c, experiment, sink));
    }
    RunManifest manifest;
    manifest.command = "run";
    manifest.config = snapshot_config(c);
    manifest.seed = c.seed;
    manifest.input_digests = input_digests(c);
    manifest.add_output("transcripts", result.transcripts);
    write_json(out_dir / "manifest.json", manifest);

    if (!quiet) {
        const RunSummary &s = result.summary;
        std::cout << "rounds              " << s.rounds << " (" << result.outcome.passes.size() << " pass"
                  << (result.outcome.passes.size() == 1 ? "" : "es") << ")\n"
                  << "test rounds         " << s.tests << ", failed " << s.failed_tests << '\n'
                  << "computation rounds  " << s.computations << '\n'
                  << "discarded rounds    " << s.discarded << '\n'
                  << "test pass rate " << fixed(s.pass_rate(), 3) << '\n'
                  << "mean failure rate " << fixed(1 - s.pass_rate(), 3) << '\n'
                  << "transcripts         " << result.transcripts.string() << '\n';
    }
    return result;
}

struct RunArgs {
    std::string config;
    std::string out;
    std::optional<int> threads;
};

int cmd_run(const RunArgs &a) {
    auto c = mitigate::load_config(a.config);
    if (a.threads) c.threads = *a.threads;
    const fs::path out = choose_output_dir(
        a.out, c.output_dir.empty() ? std::string() : mitigate::detail::resolve(c, c.output_dir).string());
    const auto r = run_experiment(c, out);
    if (r.outcome.reason == "estimation-infeasible") {
        return report_status("Abort", "estimation-infeasible: " + r.outcome.estimation.reason);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- mitigate / report

struct Analysis {
    mitigate::ExperimentConfig config;
    mitigate::ProtocolOutcome outcome;
    std::vector<double> phi;                     // all analysed passes, global index
    std::vector<mitigate::RoundRange> baskets;   // global index
    std::vector<std::uint8_t> mask;
};

/// Locates the manifest written next to `transcripts` by `run`, checks
/// every recorded digest and returns its config snapshot.
std::optional<mitigate::ExperimentConfig> verified_manifest_config(const fs::path &transcripts) {
    const fs::path path = transcripts.parent_path() / "manifest.json";
    if (!fs::exists(path)) return std::nullopt;
    const auto manifest = mitigate::read_json_file(path).get<RunManifest>();
    const auto it = manifest.output_digests.find("transcripts");
    if (it != manifest.output_digests.end() && manifest.outputs.at("transcripts") == transcripts.filename().string()) {
        const std::string actual = file_digest(transcripts);
        if (actual != it->second) {
            throw std::runtime_error("digest mismatch for " + transcripts.string() + ": manifest " + it->second +
                                     ", file " + actual);
        }
    }
    auto c = manifest.config.get<mitigate::ExperimentConfig>();
    for (const auto &[name, digest] : input_digests(c)) {
        const auto recorded = manifest.input_digests.find(name);
        if (recorded != manifest.input_digests.end() && recorded->second != digest) {
            throw std::runtime_error("input '" + name + "' changed since the run: manifest " + recorded->second +
                                     ", now " + digest);
        }
    }
    return c;
}

Analysis analyse(const fs::path &transcripts, const std::string &config_path) {
    Analysis a;
    auto from_manifest = verified_manifest_config(transcripts);
    if (!config_path.empty()) {
        a.config = mitigate::load_config(config_path);
    } else if (from_manifest) {
        a.config = *from_manifest;
    } else {
        throw std::runtime_error("no --config given and no manifest.json beside " + transcripts.string());
    }
    const auto experiment = mitigate::load_experiment(a.config);
    auto observer = [&a](int, const mitigate::Schedule &, const mitigate::PhiSeries &phi) {
        a.phi.insert(a.phi.end(), phi.phi.begin(), phi.phi.end());
    };
    a.outcome = mitigate::drive_protocol(
        a.config, *experiment.context,
        mitigate::replay_source(a.config, mitigate::read_stored_rounds(transcripts)), observer);
    for (const auto &pass : a.outcome.passes) {
        for (const auto &b : pass.baskets) {
            a.baskets.push_back({pass.offset + b.range.begin, pass.offset + b.range.end});
        }
    }
    a.mask = mitigate::basket_mask(static_cast<std::int64_t>(a.phi.size()), a.baskets);
    return a;
}

void write_phi_csv_file(const fs::path &path, const Analysis &a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    mitigate::write_phi_csv(out, a.phi, 0, &a.mask);
}

struct AnalysisArgs {
    std::string transcripts;
    std::string config;
    std::string out;
};

fs::path analysis_dir(const AnalysisArgs &a) {
    if (!a.out.empty()) return a.out;
    const fs::path parent = fs::path(a.transcripts).parent_path();
    return parent.empty() ? fs::path(".") : parent;
}

json baskets_json(const mitigate::ProtocolOutcome &o) {
    json list = json::array();
    for (const auto &pass : o.passes) {
        for (const auto &b : pass.baskets) {
            json j = b;
            j["repetition"] = pass.repetition;
            j["global_begin"] = pass.offset + b.range.begin;
            j["global_end"] = pass.offset + b.range.end;
            list.push_back(std::move(j));
        }
    }
    return list;
}

int mitigate_into(const AnalysisArgs &args, Analysis *keep = nullptr, bool quiet = false) {
    Analysis a = analyse(args.transcripts, args.config);
    const fs::path out = analysis_dir(args);
    fs::create_directories(out);
    write_json(out / "verdict.json", a.outcome);
    write_json(out / "baskets.json", baskets_json(a.outcome));
    write_phi_csv_file(out / "phi.csv", a);

    RunManifest manifest;
    manifest.command = "mitigate";
    manifest.config = snapshot_config(a.config);
    manifest.seed = a.config.seed;
    manifest.input_digests = input_digests(a.config);
    manifest.input_digests["transcripts"] = file_digest(args.transcripts);
    manifest.add_output("verdict", out / "verdict.json");
    manifest.add_output("baskets", out / "baskets.json");
    manifest.add_output("phi", out / "phi.csv");
    write_json(out / "mitigate_manifest.json", manifest);

    const auto &o = a.outcome;
    if (!quiet) {
        std::cout << "baskets found  " << o.baskets_found() << '\n'
                  << "basket size N  " << o.basket_size << ", tau " << fixed(o.tau, 4) << '\n'
                  << "verdict        " << mitigate::verdict_name(o.status);
        if (o.status != mitigate::Verdict::abort) std::cout << ", confidence " << fixed(o.confidence, 6);
        std::cout << '\n';
    }
    const bool aborted = o.status == mitigate::Verdict::abort;
    const std::string reason = o.reason;
    if (keep) *keep = std::move(a);
    if (!aborted) return kExitOk;
    return quiet ? kExitAbort : report_status("Abort", reason);
}

int cmd_mitigate(const AnalysisArgs &args) {
    return mitigate_into(args);
}

int report_into(const AnalysisArgs &args, const std::string &title, bool quiet = false) {
    const Analysis a = analyse(args.transcripts, args.config);
    const fs::path out = analysis_dir(args);
    fs::create_directories(out);
    write_phi_csv_file(out / "phi.csv", a);
    write_text(out / "pass_rate.svg",
               mitigate::render_pass_rate_svg(a.phi, 0, a.config.p_tilde, a.baskets, title));
    if (quiet) return kExitOk;
    std::cout << "rows      " << a.phi.size() << '\n'
              << "baskets   " << a.baskets.size() << '\n'
              << "csv       " << (out / "phi.csv").string() << '\n'
              << "svg       " << (out / "pass_rate.svg").string() << '\n';
    return kExitOk;
}

int cmd_report(const AnalysisArgs &args, const std::string &title) {
    return report_into(args, title);
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
    std::string pattern = "builtin:cnot15";
    std::string colouring;
    std::string expect;  // cnot | identity | none; empty picks cnot for the builtin
    int runs = 1000;
    std::uint64_t seed = 1;
};

int cmd_oracle(const OracleArgs &a) {
    pattern::MeasurementPattern pat;
    std::optional<pattern::KColouring> colouring;
    if (a.pattern == "builtin:cnot15") {
        const auto b = pattern::cnot15();
        pat = b.pattern;
        colouring = b.colouring;
    } else {
        pat = mitigate::read_json_file(a.pattern).get<pattern::MeasurementPattern>();
    }
    if (!a.colouring.empty()) {
        colouring = mitigate::read_json_file(a.colouring).get<pattern::KColouring>();
    }
    if (!colouring) {
        const auto found = pattern::two_colour(pattern::Graph(pat.num_vertices, pat.edges));
        if (!std::holds_alternative<pattern::KColouring>(found)) {
            throw std::invalid_argument("pattern graph is not bipartite; pass --colouring");
        }
        colouring = std::get<pattern::KColouring>(found);
    }
    const std::string expect = a.expect.empty() ? (a.pattern == "builtin:cnot15" ? "cnot" : "none") : a.expect;
    std::optional<std::vector<std::vector<int>>> table;
    if (expect == "cnot") {
        if (pat.inputs.size() != 2 || pat.outputs.size() != 2) {
            throw std::invalid_argument("--expect cnot needs two inputs and two outputs");
        }
        table = rounds::cnot_truth_table();
    } else if (expect == "identity") {
        if (pat.inputs.size() != pat.outputs.size()) {
            throw std::invalid_argument("--expect identity needs as many outputs as inputs");
        }
        table = rounds::identity_truth_table(pat.inputs.size());
    } else if (expect != "none") {
        throw std::invalid_argument("--expect must be cnot, identity or none");
    }
    auto ctx = std::make_shared<const rounds::RoundContext>(std::move(pat), std::move(*colouring));
    const auto rows = rounds::run_oracle(ctx, a.runs, a.seed, table);
    int good = 0;
    std::cout << "input  exact        blinded            expected  result\n";
    for (const auto &row : rows) {
        std::ostringstream exact;
        for (const auto &[o, prob] : row.exact) {
            if (prob > 1e-12) exact << rounds::bit_string(o) << ':' << fixed(prob, 3) << ' ';
        }
        std::ostringstream blinded;
        for (const auto &[o, count] : row.blinded) blinded << rounds::bit_string(o) << 'x' << count << ' ';
        std::cout << std::left << std::setw(7) << rounds::bit_string(row.input) << std::setw(13) << exact.str()
                  << std::setw(19) << blinded.str() << std::setw(10)
                  << (row.expected ? rounds::bit_string(*row.expected) : std::string("-"))
                  << (row.ok() ? "ok" : "MISMATCH") << '\n';
        good += row.ok();
    }
    std::cout << good << '/' << rows.size() << " inputs correct\n";
    return good == static_cast<int>(rows.size()) ? kExitOk : report_status("Abort", "oracle-mismatch");
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
    double target = 0.155;
    double s = 0.9;
    double exponent = 8;
    std::int64_t rounds = 200000;
    std::uint64_t seed = 2026;
};

int cmd_calibrate(const CalibrateArgs &a) {
    const auto b = pattern::cnot15();
    auto ctx = std::make_shared<const rounds::RoundContext>(b.pattern, b.colouring);
    const auto r = mitigate::calibrate_scale(ctx, a.target, a.s, a.exponent, a.rounds, a.seed);
    std::cout << "scale    " << fixed(r.scale, 7) << '\n'
              << "failure  " << fixed(r.failure, 5) << " at s = " << a.s << '\n'
              << json(noise::device_shape(r.scale)).dump() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- emit-builtin

mitigate::ExperimentConfig data_config(noise::ScheduleKind kind) {
    auto c = mitigate::reference_experiment(kind, 1);
    c.pattern = "cnot15_pattern.json";
    c.colouring = "cnot15_colouring.json";
    c.coupling_map = "heavy_hex_127.json";
    c.noise_model = "noise_base.json";
    return c;
}

int cmd_emit_builtin(const std::string &out_flag) {
    const fs::path out = choose_output_dir(out_flag);
    fs::create_directories(out);
    const auto b = pattern::cnot15();
    write_json(out / "cnot15_pattern.json", b.pattern);
    write_json(out / "cnot15_colouring.json", b.colouring);
    write_json(out / "heavy_hex_127.json", pattern::heavy_hex_127());
    write_json(out / "noise_base.json", noise::calibrated_base_model());
    write_json(out / "fluctuating.json", data_config(noise::ScheduleKind::random_walk));
    write_json(out / "constant.json", data_config(noise::ScheduleKind::constant));
    auto noiseless = data_config(noise::ScheduleKind::constant);
    noiseless.noise_model = "builtin:noiseless";
    noiseless.total_rounds = 1000;
    noiseless.basket_size = 500;
    noiseless.max_repetitions = 1;
    write_json(out / "noiseless.json", noiseless);
    std::cout << "wrote built-in data to " << out.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- reproduce

struct ReproduceArgs {
    std::uint64_t seed = 1;
    std::string out;
    int threads = 1;
};

struct Row {
    std::string quantity;
    std::string reference;
    std::string obtained;
};

int cmd_reproduce(const ReproduceArgs &a) {
    const fs::path out = choose_output_dir(a.out);
    fs::create_directories(out);
    std::vector<Row> rows;
    json record;

    // Resource estimation.
    const estimate::BoundInputs in{2, 0, 0.15};
    const auto free_tau = estimate::minimize_n_given_eps(in, 0.05);
    estimate::MinimizeOptions pinned;
    pinned.fixed_tau = 0.9;
    const auto at_090 = estimate::minimize_n_given_eps(in, 0.05, pinned);
    const auto eps_5198 = estimate::minimize_eps_given_n(in, 5198, pinned);
    const auto eps_6818 = estimate::minimize_eps_given_n(in, 6818, pinned);
    rows.push_back({"tau (free minimiser, eps 0.05)", "0.90", fixed(free_tau.tau, 3) + " (n " + std::to_string(free_tau.n) + ")"});
    rows.push_back({"tau = 0.90 (pinned, eps 0.05)", "0.90", fixed(at_090.tau, 3) + " (n " + std::to_string(at_090.n) + ")"});
    rows.push_back({"eps_max at N = 5198, tau 0.90", "0.17", fixed(eps_5198.eps_max, 4)});
    rows.push_back({"eps_max at N = 6818, tau 0.90", "0.08", fixed(eps_6818.eps_max, 4)});
    record["estimation"] = {{"free_tau", free_tau}, {"tau_090", at_090}, {"n_5198", eps_5198}, {"n_6818", eps_6818}};

    // Both noise modes: run, then replay the transcripts offline.
    for (const auto kind : {noise::ScheduleKind::random_walk, noise::ScheduleKind::constant}) {
        const bool walk = kind == noise::ScheduleKind::random_walk;
        const std::string name = walk ? "fluctuating" : "constant";
        auto c = mitigate::reference_experiment(kind, a.seed);
        c.threads = a.threads;
        const fs::path dir = out / name;
        fs::create_directories(dir);
        write_json(dir / "config.json", snapshot_config(c));
        std::cout << "[" << name << "] simulating..." << std::endl;
        const auto run = run_experiment(c, dir, true);
        Analysis analysis;
        const AnalysisArgs args{run.transcripts.string(), "", dir.string()};
        mitigate_into(args, &analysis, true);
        report_into(args, walk ? "Fluctuating noise" : "Constant noise", true);
        const auto &o = analysis.outcome;
        std::size_t large = 0;
        for (const auto &b : analysis.baskets) large += b.size() >= 5000;
        const std::string verdict = std::string(mitigate::verdict_name(o.status)) +
                                    (o.status == mitigate::Verdict::abort ? " (" + o.reason + ")" : "");
        rows.push_back({name + ": test pass rate", "-", fixed(run.summary.pass_rate(), 4)});
        rows.push_back({name + ": baskets of size >= 5000", walk ? "2" : "0", std::to_string(large)});
        if (walk) {
            rows.push_back({name + ": verdict", "True", verdict});
            rows.push_back({name + ": final confidence", "0.98",
                            o.status == mitigate::Verdict::abort ? "-" : fixed(o.confidence, 4)});
        } else {
            rows.push_back({name + ": verdict", "Abort (no baskets)", verdict});
        }
        record[name] = {{"summary",
                         {{"rounds", run.summary.rounds},
                          {"tests", run.summary.tests},
                          {"failed_tests", run.summary.failed_tests},
                          {"pass_rate", run.summary.pass_rate()}}},
                        {"outcome", o}};
    }

    std::size_t width = 0;
    for (const auto &r : rows) width = std::max(width, r.quantity.size());
    std::ostringstream table;
    table << std::left << std::setw(static_cast<int>(width) + 2) << "quantity" << std::setw(20) << "reference"
          << "obtained\n";
    for (const auto &r : rows) {
        table << std::left << std::setw(static_cast<int>(width) + 2) << r.quantity << std::setw(20) << r.reference
              << r.obtained << '\n';
    }
    std::cout << table.str();
    write_text(out / "comparison.txt", table.str());
    json rows_json = json::array();
    for (const auto &r : rows) rows_json.push_back({{"quantity", r.quantity}, {"reference", r.reference}, {"obtained", r.obtained}});
    record["table"] = rows_json;
    record["seed"] = a.seed;
    write_json(out / "comparison.json", record);
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Verified blind MBQC with noise-aware error mitigation"};
    app.set_version_flag("--version", std::string(vbem::kVersion));
    app.require_subcommand(1);

    EstimateArgs est;
    auto *estimate = app.add_subcommand("estimate", "Optimise the local-correctness bound");
    estimate->add_option("--k", est.k, "Number of trap colours")->check(CLI::PositiveNumber);
    estimate->add_option("--p", est.p, "Decision error probability of the computation");
    estimate->add_option("--pmax", est.p_max, "Largest tolerated test failure rate");
    auto *eps_opt = estimate->add_option("--eps", est.eps, "Target epsilon: find the smallest N");
    auto *n_opt = estimate->add_option("--n", est.n, "Fixed N: minimise epsilon");
    eps_opt->excludes(n_opt);
    estimate->add_option("--tau", est.tau, "Pin the test-round fraction");
    estimate->add_option("--trace", est.trace, "Write every evaluated point to this JSONL file");
    estimate->add_flag("--json", est.json_output, "Print the result as JSON");

    RunArgs run;
    auto *run_cmd = app.add_subcommand("run", "Simulate an experiment and persist transcripts");
    run_cmd->add_option("--config", run.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_option("--threads", run.threads, "Worker threads (results do not depend on it)");

    AnalysisArgs mit;
    auto *mitigate_cmd = app.add_subcommand("mitigate", "Offline basketing analysis of stored transcripts");
    mitigate_cmd->add_option("--transcripts", mit.transcripts, "transcripts.jsonl")->required()->check(CLI::ExistingFile);
    mitigate_cmd->add_option("--config", mit.config, "Experiment config (default: manifest.json beside transcripts)");
    mitigate_cmd->add_option("--out", mit.out, "Output directory (default: transcript directory)");

    AnalysisArgs rep;
    std::string title = "Test round pass rate";
    auto *report = app.add_subcommand("report", "Pass-rate CSV and SVG with basket shading");
    report->add_option("--transcripts", rep.transcripts, "transcripts.jsonl")->required()->check(CLI::ExistingFile);
    report->add_option("--config", rep.config, "Experiment config (default: manifest.json beside transcripts)");
    report->add_option("--out", rep.out, "Output directory (default: transcript directory)");
    report->add_option("--title", title, "Plot title");

    OracleArgs orc;
    auto *oracle = app.add_subcommand("oracle", "Check blinded noiseless execution against exact semantics");
    oracle->add_option("--pattern", orc.pattern, "Pattern JSON or builtin:cnot15");
    oracle->add_option("--colouring", orc.colouring, "Colouring JSON (default: two-colouring of the graph)");
    oracle->add_option("--expect", orc.expect, "cnot, identity or none");
    oracle->add_option("--runs", orc.runs, "Blinded runs per input")->check(CLI::PositiveNumber);
    oracle->add_option("--seed", orc.seed, "Master seed");

    ReproduceArgs repro;
    auto *reproduce = app.add_subcommand("reproduce", "End-to-end CNOT experiment with a comparison table");
    reproduce->alias("reproduce-paper");
    reproduce->add_option("--seed", repro.seed, "Master seed");
    reproduce->add_option("--out", repro.out, "Output directory");
    reproduce->add_option("--threads", repro.threads, "Worker threads")->check(CLI::PositiveNumber);

    CalibrateArgs cal;
    auto *calibrate = app.add_subcommand("calibrate", "Fit the base noise scale to a target test failure rate");
    calibrate->add_option("--target", cal.target, "Target failure rate");
    calibrate->add_option("--s", cal.s, "Noise level at which the target applies");
    calibrate->add_option("--exponent", cal.exponent, "Scaling exponent");
    calibrate->add_option("--rounds", cal.rounds, "Test rounds per evaluation");
    calibrate->add_option("--seed", cal.seed, "Seed");

    std::string emit_out;
    auto *emit = app.add_subcommand("emit-builtin", "Write built-in pattern, device and configs as JSON");
    emit->add_option("--out", emit_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kExitOk : kExitError;
    }

    try {
        if (*estimate) {
            if (!est.eps && !est.n) throw std::invalid_argument("estimate needs --eps or --n");
            return cmd_estimate(est);
        }
        if (*run_cmd) return cmd_run(run);
        if (*mitigate_cmd) return cmd_mitigate(mit);
        if (*report) return cmd_report(rep, title);
        if (*oracle) return cmd_oracle(orc);
        if (*reproduce) return cmd_reproduce(repro);
        if (*calibrate) return cmd_calibrate(cal);
        if (*emit) return cmd_emit_builtin(emit_out);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return report_status("Error", e.what());
    }
    return kExitError;
}
