/*
 * Copyright 2026 The destloc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "destloc/cli.hpp"
#include "destloc/error.hpp"
#include "destloc/trace.hpp"

namespace destloc::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("destloc_cli_" + std::string(::testing::UnitTest::GetInstance()
                                                 ->current_test_info()
                                                 ->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int call(const std::vector<std::string>& args) {
        out_.str("");
        err_.str("");
        return run(args, out_, err_);
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    static std::vector<std::vector<std::string>> csv(const std::string& text) {
        std::vector<std::vector<std::string>> rows;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            std::vector<std::string> cells;
            std::istringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            rows.push_back(cells);
        }
        return rows;
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

TEST_F(CliTest, SummarizeTwoLineFixture) {
    std::ofstream(path("t.tsv")) << "0\tA\tB\n5\tB\tA\n";
    ASSERT_EQ(call({"summarize", path("t.tsv")}), kOk) << err_.str();
    EXPECT_EQ(out_.str().rfind("frames=2 addresses=2 destinations=2", 0), 0u) << out_.str();
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(call({}), kUsage);
    EXPECT_EQ(call({"frobnicate"}), kUsage);
    EXPECT_EQ(call({"summarize", "x", "--bogus"}), kUsage);
    EXPECT_EQ(call({"gen", "--length", "3"}), kUsage);  // no model
    EXPECT_EQ(call({"--help"}), kOk);
}

TEST_F(CliTest, RuntimeErrorsAreReported) {
    EXPECT_EQ(call({"summarize", path("missing.tsv")}), kFailure);
    EXPECT_NE(err_.str().find("missing.tsv"), std::string::npos);

    std::ofstream(path("bad.tsv")) << "5\tA\tB\n0\tB\tA\n";
    EXPECT_EQ(call({"runs", path("bad.tsv")}), kFailure);
    EXPECT_NE(err_.str().find("line 2"), std::string::npos) << err_.str();

    std::ofstream(path("t.tsv")) << "0\tA\tB\n";
    EXPECT_EQ(call({"wss", path("t.tsv"), "--windows", "5"}), kFailure);
    EXPECT_EQ(call({"simulate", path("t.tsv"), "--policies", "CLOCK", "--out-dir", path("o")}),
              kFailure);
}

TEST_F(CliTest, GenCyclicThenStackdist) {
    ASSERT_EQ(call({"gen", "--cyclic", "30", "--length", "10000", "--seed", "7", "--out",
                    path("t.tsv")}),
              kOk)
        << err_.str();
    ASSERT_EQ(call({"stackdist", path("t.tsv")}), kOk) << err_.str();
    const auto rows = csv(out_.str());
    ASSERT_EQ(rows.front(), (std::vector<std::string>{"distance", "count", "pdf", "cdf"}));
    ASSERT_EQ(rows.size(), 32u);  // header, d = 1..30, inf
    for (std::size_t d = 1; d < 30; ++d) EXPECT_EQ(rows[d][1], "0");
    EXPECT_EQ(rows[30][0], "30");
    EXPECT_EQ(rows[30][1], "9970");
    EXPECT_EQ(rows[31][0], "inf");

    ASSERT_EQ(call({"stackdist", path("t.tsv"), "--naive", "--out", path("naive.csv")}), kOk);
    ASSERT_EQ(call({"stackdist", path("t.tsv")}), kOk);
    EXPECT_EQ(slurp(path("naive.csv")), out_.str());
}

TEST_F(CliTest, SimulateShape) {
    ASSERT_EQ(call({"gen", "--uniform", "20", "--length", "2000", "--seed", "3", "--out",
                    path("t.tsv")}),
              kOk);
    ASSERT_EQ(call({"simulate", path("t.tsv"), "--policies", "MIN,LRU,FIFO,RAND", "--capacities",
                    "1,2,4,8", "--seed", "1", "--out-dir", path("sim")}),
              kOk)
        << err_.str();
    for (const auto* name : {"miss_ratio.csv", "interfault.csv"}) {
        const auto rows = csv(slurp(path(std::string("sim/") + name)));
        ASSERT_EQ(rows.size(), 5u) << name;
        EXPECT_EQ(rows[0], (std::vector<std::string>{"capacity", "MIN", "LRU", "FIFO", "RAND"}));
        for (std::size_t r = 1; r < rows.size(); ++r) EXPECT_EQ(rows[r].size(), 5u);
    }
}

TEST_F(CliTest, GenFromJsonSpecAndSplit) {
    std::ofstream(path("spec.json")) << R"({
        "model": "interleave", "length": 40, "seed": 2,
        "streams": [
            {"weight": 1, "proto": "LAT", "spec": {"model": "cyclic", "period": 4}},
            {"weight": 3, "spec": {"model": "lsm", "geometric": 0.5, "depth": 5}}
        ]})";
    ASSERT_EQ(call({"gen", "--spec", path("spec.json"), "--out", path("t.tsv")}), kOk)
        << err_.str();
    ASSERT_EQ(call({"split", path("t.tsv"), "--proto", "LAT", "--match-out", path("lat.tsv"),
                    "--rest-out", path("rest.tsv")}),
              kOk)
        << err_.str();
    EXPECT_EQ(parse_trace_file(path("lat.tsv")).size(), 10u);
    EXPECT_EQ(parse_trace_file(path("rest.tsv")).size(), 30u);
}

TEST_F(CliTest, GenLsmFlags) {
    ASSERT_EQ(call({"gen", "--lsm-pmf", "0.5,0.3,0.2", "--stack-size", "4", "--length", "50",
                    "--seed", "9"}),
              kOk)
        << err_.str();
    std::istringstream in(out_.str());
    EXPECT_EQ(parse_trace(in).size(), 50u);
    EXPECT_EQ(call({"gen", "--lsm-pmf", "0.5,0.3", "--length", "5"}), kFailure);
}

TEST_F(CliTest, SpecFromJsonErrors) {
    EXPECT_THROW(spec_from_json(R"({"model": "zipf"})"), SpecError);
    EXPECT_THROW(spec_from_json(R"({"model": "cyclic"})"), SpecError);
    EXPECT_THROW(spec_from_json("not json"), SpecError);
    const auto spec = spec_from_json(R"({"model": "irm", "pmf": [0.25, 0.75], "length": 3})");
    EXPECT_EQ(spec.length, 3u);
    EXPECT_TRUE(std::holds_alternative<synth::Irm>(spec.model));
}

TEST_F(CliTest, ReportIsConsistent) {
    ASSERT_EQ(call({"gen", "--lsm-geometric", "0.8", "--depth", "25", "--length", "5000",
                    "--seed", "4", "--out", path("t.tsv")}),
              kOk);
    ASSERT_EQ(call({"report", path("t.tsv"), "--out-dir", path("rep")}), kOk) << err_.str();
    for (const auto* name :
         {"summary.txt", "concentration.csv", "concentration_quantiles.csv", "run_lengths.csv",
          "working_set.csv", "stack_distance.csv", "stack_levels.csv", "miss_ratio.csv",
          "interfault.csv", "search_time.csv"}) {
        EXPECT_TRUE(fs::exists(dir_ / "rep" / name)) << name;
    }

    const auto miss = csv(slurp(path("rep/miss_ratio.csv")));
    const auto gap = csv(slurp(path("rep/interfault.csv")));
    const auto time = csv(slurp(path("rep/search_time.csv")));
    ASSERT_EQ(miss.size(), gap.size());
    ASSERT_EQ(miss.size(), time.size());
    const double n = std::stod(miss.back()[0]);  // last row is the destination count
    for (std::size_t r = 1; r < miss.size(); ++r) {
        const double c = std::stod(miss[r][0]);
        for (std::size_t k = 1; k < miss[r].size(); ++k) {
            const double p = std::stod(miss[r][k]);
            EXPECT_NEAR(std::stod(gap[r][k]) * p, 1.0, 1e-12);
            EXPECT_NEAR(std::stod(time[r][k]), (1 + std::log2(c)) / (1 + std::log2(n)) + p, 1e-12);
        }
    }
}

TEST_F(CliTest, ReportSplitWritesSubdirectories) {
    std::ofstream(path("spec.json")) << R"({
        "model": "interleave", "length": 600, "seed": 2,
        "streams": [
            {"weight": 1, "proto": "LAT", "spec": {"model": "cyclic", "period": 6}},
            {"weight": 2, "spec": {"model": "uniform", "addresses": 9}}
        ]})";
    ASSERT_EQ(call({"gen", "--spec", path("spec.json"), "--out", path("t.tsv")}), kOk);
    ASSERT_EQ(call({"report", path("t.tsv"), "--out-dir", path("rep"), "--split-proto", "LAT"}),
              kOk)
        << err_.str();
    EXPECT_EQ(slurp(path("rep/matching/summary.txt")).rfind("frames=200 ", 0), 0u);
    EXPECT_EQ(slurp(path("rep/rest/summary.txt")).rfind("frames=400 ", 0), 0u);
}

}  // namespace
}  // namespace destloc::cli
