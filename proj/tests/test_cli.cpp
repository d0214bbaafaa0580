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


// Drives the installed CLI binary end to end through the shell.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct Result {
    int code = -1;
    std::string out;  // stdout and stderr, interleaved
};

Result run(const std::string &args) {
    const std::string cmd = std::string(VBEM_CLI_PATH) + " " + args + " 2>&1";
    Result r;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
   protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("vbem_cli_" + std::string(info->name()) + "_" + std::to_string(getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override {
        if (!HasFailure()) fs::remove_all(dir_);
    }

    /// Noiseless CNOT run small enough for a unit test that still certifies.
    fs::path desk_config() const {
        auto j = nlohmann::json::parse(slurp(fs::path(VBEM_TEST_DATA_DIR) / "noiseless.json"));
        for (const char *key : {"pattern", "colouring", "coupling_map"}) {
            j[key] = (fs::path(VBEM_TEST_DATA_DIR) / j[key].get<std::string>()).string();
        }
        j["total_rounds"] = 20000;
        j["basket_size"] = 2000;
        const fs::path path = dir_ / "desk.json";
        std::ofstream(path) << j.dump(2);
        return path;
    }

    fs::path dir_;
};

TEST_F(Cli, EstimateFixedN) {
    const auto r = run("estimate --k 2 --p 0 --pmax 0.15 --n 5198 --tau 0.9");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("0.1726"), std::string::npos) << r.out;
}

TEST_F(Cli, EstimateJsonAndAbort) {
    auto r = run("estimate --k 2 --p 0 --pmax 0.15 --eps 0.05 --tau 0.9 --json");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("n"), 7596);

    r = run("estimate --k 2 --p 0 --pmax 0.3 --eps 0.05");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("\"status\":\"Abort\""), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("p_max >= r/k"), std::string::npos);

    r = run("estimate --k 2 --p 0 --pmax 0.15 --eps 0.05 --n 100");
    EXPECT_NE(r.code, 0);  // --eps and --n exclude each other
}

TEST_F(Cli, EstimateTrace) {
    const auto trace = dir_ / "trace.jsonl";
    const auto r = run("estimate --k 2 --p 0 --pmax 0.15 --n 6818 --tau 0.9 --trace " + trace.string());
    ASSERT_EQ(r.code, 0) << r.out;
    std::ifstream in(trace);
    std::string line;
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_TRUE(nlohmann::json::parse(line).contains("log_eps"));
}

TEST_F(Cli, OracleCnot) {
    const auto r = run("oracle --runs 200 --expect cnot");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("4/4 inputs correct"), std::string::npos) << r.out;
    const auto wrong = run("oracle --runs 20 --expect identity");
    EXPECT_EQ(wrong.code, 2) << wrong.out;
    EXPECT_NE(wrong.out.find("oracle-mismatch"), std::string::npos);
}

TEST_F(Cli, NoiselessRunIsDeterministic) {
    const std::string cfg = (fs::path(VBEM_TEST_DATA_DIR) / "noiseless.json").string();
    const auto a = run("run --config " + cfg + " --out " + (dir_ / "a").string());
    ASSERT_EQ(a.code, 0) << a.out;
    EXPECT_NE(a.out.find("test pass rate 1.000"), std::string::npos) << a.out;
    const auto b = run("run --config " + cfg + " --out " + (dir_ / "b").string() + " --threads 3");
    ASSERT_EQ(b.code, 0) << b.out;
    const auto ma = nlohmann::json::parse(slurp(dir_ / "a" / "manifest.json"));
    const auto mb = nlohmann::json::parse(slurp(dir_ / "b" / "manifest.json"));
    EXPECT_EQ(ma.at("output_digests").at("transcripts"), mb.at("output_digests").at("transcripts"));
    EXPECT_EQ(slurp(dir_ / "a" / "transcripts.jsonl"), slurp(dir_ / "b" / "transcripts.jsonl"));
}

TEST_F(Cli, MitigateIsReproducibleAndReportCoversEveryRound) {
    const auto cfg = desk_config();
    ASSERT_EQ(run("run --config " + cfg.string() + " --out " + (dir_ / "run").string()).code, 0);
    const auto transcripts = (dir_ / "run" / "transcripts.jsonl").string();
    const auto m1 = run("mitigate --transcripts " + transcripts + " --out " + (dir_ / "m1").string());
    ASSERT_EQ(m1.code, 0) << m1.out;
    const auto m2 = run("mitigate --transcripts " + transcripts + " --out " + (dir_ / "m2").string());
    ASSERT_EQ(m2.code, 0) << m2.out;
    const std::string verdict = slurp(dir_ / "m1" / "verdict.json");
    EXPECT_EQ(verdict, slurp(dir_ / "m2" / "verdict.json"));
    EXPECT_EQ(nlohmann::json::parse(verdict).at("status"), "True");

    const auto rep = run("report --transcripts " + transcripts + " --out " + (dir_ / "rep").string());
    ASSERT_EQ(rep.code, 0) << rep.out;
    const std::string csv = slurp(dir_ / "rep" / "phi.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 20000 + 1);
    EXPECT_NE(slurp(dir_ / "rep" / "pass_rate.svg").find("<svg"), std::string::npos);
}

TEST_F(Cli, MitigateDetectsTamperedTranscripts) {
    const auto cfg = desk_config();
    ASSERT_EQ(run("run --config " + cfg.string() + " --out " + (dir_ / "run").string()).code, 0);
    const auto path = dir_ / "run" / "transcripts.jsonl";
    std::ofstream(path, std::ios::app) << "\n";
    const auto r = run("mitigate --transcripts " + path.string() + " --out " + (dir_ / "m").string());
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_NE(r.out.find("digest mismatch"), std::string::npos) << r.out;
}

TEST_F(Cli, MitigateAbortsWithoutCertifiableBasket) {
    const std::string cfg = (fs::path(VBEM_TEST_DATA_DIR) / "noiseless.json").string();
    ASSERT_EQ(run("run --config " + cfg + " --out " + (dir_ / "run").string()).code, 0);
    const auto r = run("mitigate --transcripts " + (dir_ / "run" / "transcripts.jsonl").string() + " --out " +
                       (dir_ / "m").string());
    EXPECT_EQ(r.code, 2) << r.out;
    EXPECT_NE(r.out.find("repetition-cap"), std::string::npos) << r.out;
}

TEST_F(Cli, BadConfigIsAnError) {
    const auto path = dir_ / "bad.json";
    std::ofstream(path) << R"({"total_rouns": 10})";
    const auto r = run("run --config " + path.string() + " --out " + (dir_ / "o").string());
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_NE(r.out.find("\"status\":\"Error\""), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("total_rouns"), std::string::npos);
}

TEST_F(Cli, ReproduceAliasIsAccepted) {
    const auto r = run("reproduce-paper --help");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("--seed"), std::string::npos);
}

}  // namespace
