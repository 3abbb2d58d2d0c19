// Copyright 2026 The tisim Authors
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

#include "tisim/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "tisim/canonical.h"
#include "tisim/scenario.h"

using namespace tisim;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = TISIM_SCENARIO_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "tisim");
    std::ostringstream out;
    std::ostringstream err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scenario(const std::string &name) {
    return (kScenarios / (name + ".json")).string();
}

class TempDir {
   public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("tisim-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path &path() const { return path_; }

    fs::path write(const std::string &name, const std::string &content) const {
        auto p = path_ / name;
        std::ofstream(p) << content;
        return p;
    }

   private:
    fs::path path_;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(CliCheck, exit_codes) {
    EXPECT_EQ(invoke({"check", scenario("maudlin-perfect")}).code, cli::kExitOk);
    EXPECT_EQ(invoke({"check", scenario("maudlin-bigbang")}).code, cli::kExitOk);
    EXPECT_EQ(invoke({"check", scenario("maudlin-with-c")}).code, cli::kExitOk);
    EXPECT_EQ(invoke({"check", scenario("renninger")}).code, cli::kExitOk);

    auto open = invoke({"check", scenario("maudlin-open")});
    EXPECT_EQ(open.code, cli::kExitPathological);
    EXPECT_NE(open.err.find("EscapingOffer(L)"), std::string::npos);

    EXPECT_EQ(invoke({"check", "/nonexistent/nope.json"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"check"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"check", scenario("renninger"), "--format", "xml"}).code, cli::kExitUsage);
}

TEST(CliCheck, schema_error_is_usage) {
    TempDir dir;
    auto bad = dir.write("bad.json", R"({"label": "x"})");
    auto result = invoke({"check", bad.string()});
    EXPECT_EQ(result.code, cli::kExitUsage);
    EXPECT_FALSE(result.err.empty());
    auto broken = dir.write("broken.json", "{not json");
    EXPECT_EQ(invoke({"check", broken.string()}).code, cli::kExitUsage);
}

TEST(CliCheck, json_report) {
    auto result = invoke({"check", "--scenario", scenario("maudlin-open"), "--format", "json"});
    auto doc = nlohmann::json::parse(result.out);
    EXPECT_EQ(doc["classification"], "Pathological");
    EXPECT_EQ(doc["reasons"][0]["kind"], "EscapingOffer");
}

TEST(CliCheck, csv_report) {
    auto result = invoke({"check", scenario("maudlin-perfect"), "--format", "csv"});
    EXPECT_EQ(result.out.rfind("history,outcome,firing,firing_time,active\r\n", 0), 0u);
    EXPECT_NE(result.out.find(",L,B,"), std::string::npos);
}

TEST(CliRun, json_is_reproducible) {
    std::vector<std::string> args{"run", scenario("maudlin-perfect"), "--trials", "2000", "--seed", "5",
                                  "--format", "json", "--records"};
    auto a = invoke(args);
    auto b = invoke(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    auto doc = nlohmann::json::parse(a.out);
    EXPECT_EQ(doc["trials"], 2000);
    EXPECT_EQ(doc["records"].size(), 2000u);
    EXPECT_TRUE(doc.contains("loop_diagnostic"));
}

TEST(CliRun, csv_is_reproducible) {
    std::vector<std::string> args{"run", scenario("renninger"), "--trials", "500", "--format", "csv"};
    auto a = invoke(args);
    EXPECT_EQ(a.out, invoke(args).out);
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 501);
}

TEST(CliRun, zero_trials) {
    auto result = invoke({"run", scenario("maudlin-perfect"), "--trials", "0", "--format", "json"});
    EXPECT_EQ(result.code, 0);
    auto doc = nlohmann::json::parse(result.out);
    EXPECT_EQ(doc["trials"], 0);
    EXPECT_TRUE(doc["frequencies"].empty());
}

TEST(CliRun, pathological_setup) {
    auto result = invoke({"run", scenario("maudlin-open")});
    EXPECT_EQ(result.code, cli::kExitPathological);
    EXPECT_NE(result.err.find("EscapingOffer(L)"), std::string::npos);
}

TEST(CliRun, text_report) {
    auto result = invoke({"run", scenario("maudlin-perfect"), "--trials", "1000"});
    EXPECT_EQ(result.code, 0);
    EXPECT_NE(result.out.find("maudlin-perfect"), std::string::npos);
}

TEST(CliRun, detector_chain_reported) {
    TempDir dir;
    auto doc = canonical::maudlin_document(BoundaryCondition::PerfectAbsorber);
    doc["detector_chain"] = nlohmann::json::parse(
        R"([{"name": "d", "c1": {"re": 0.6, "im": 0}, "c2": {"re": 0.8, "im": 0}, "irreversible": true}])");
    auto path = dir.write("chain.json", doc.dump());
    auto result = invoke({"run", path.string(), "--trials", "10", "--format", "json"});
    ASSERT_EQ(result.code, 0) << result.err;
    auto out = nlohmann::json::parse(result.out);
    EXPECT_NEAR(out["detector_chain"]["distribution"]["activated"].get<double>(), 0.36, 1e-12);
}

TEST(CliRun, out_file) {
    TempDir dir;
    auto target = dir.path() / "batch.json";
    auto result = invoke({"run", scenario("maudlin-perfect"), "--trials", "100", "--format", "json", "--out",
                          target.string()});
    EXPECT_EQ(result.code, 0);
    EXPECT_TRUE(result.out.empty());
    EXPECT_EQ(nlohmann::json::parse(slurp(target))["trials"], 100);
}

TEST(CliLedger, clean_and_residual) {
    EXPECT_EQ(invoke({"ledger", scenario("maudlin-perfect")}).code, cli::kExitOk);

    auto bigbang = invoke({"ledger", scenario("maudlin-bigbang"), "--format", "json"});
    EXPECT_EQ(bigbang.code, cli::kExitOk);
    auto doc = nlohmann::json::parse(bigbang.out);
    EXPECT_TRUE(doc["clean"].get<bool>());
    bool saw_reflection = false;
    for (const auto &history : doc["histories"]) {
        for (const auto &region : history["regions"]) {
            for (const auto &component : region["components"]) {
                saw_reflection |= component["kind"] == "reflection";
            }
        }
    }
    EXPECT_TRUE(saw_reflection);

    auto open = invoke({"ledger", scenario("maudlin-open"), "--format", "csv"});
    EXPECT_EQ(open.code, cli::kExitPathological);
    EXPECT_NE(open.out.find(",L,"), std::string::npos);
    EXPECT_NE(open.out.find("true"), std::string::npos);
}

TEST(CliCompare, shipped_ensemble) {
    auto result = invoke({"compare", scenario("ensemble"), "--trials", "2000", "--format", "json"});
    ASSERT_EQ(result.code, 0) << result.err;
    auto doc = nlohmann::json::parse(result.out);
    EXPECT_EQ(doc["max_divergence"], 0.0);
    EXPECT_EQ(doc["cells"].size(), 4u);
    EXPECT_EQ(result.out, invoke({"compare", scenario("ensemble"), "--trials", "2000", "--format", "json"}).out);
}

TEST(CliCompare, independent_batches) {
    TempDir dir;
    std::ofstream(dir.path() / "perfect.json") << scenario_to_json(canonical::maudlin(BoundaryCondition::PerfectAbsorber)).dump();
    auto manifest = dir.write("ens.json", R"({
        "label": "pair", "batches": "independent",
        "cells": [{"setup": "maudlin", "state": "perfect", "scenario": "perfect.json", "trials": 20000}]
    })");
    auto result = invoke({"compare", manifest.string(), "--format", "json"});
    ASSERT_EQ(result.code, 0) << result.err;
    double divergence = nlohmann::json::parse(result.out)["max_divergence"];
    EXPECT_GT(divergence, 0.0);
    EXPECT_LT(divergence, 0.02);
}

TEST(CliCompare, bad_manifests) {
    TempDir dir;
    std::ofstream(dir.path() / "perfect.json") << scenario_to_json(canonical::maudlin(BoundaryCondition::PerfectAbsorber)).dump();
    auto unnormalized = dir.write("a.json", R"({"label": "x", "batches": "shared", "cells": [
        {"setup": "m", "state": "1", "scenario": "perfect.json", "prior": 0.3},
        {"setup": "m", "state": "2", "scenario": "perfect.json", "prior": 0.3}]})");
    EXPECT_EQ(invoke({"compare", unnormalized.string()}).code, cli::kExitUsage);
    auto empty = dir.write("b.json", R"({"label": "x", "batches": "shared", "cells": []})");
    EXPECT_EQ(invoke({"compare", empty.string()}).code, cli::kExitUsage);
    auto zero = dir.write("c.json", R"({"label": "x", "batches": "shared", "cells": [
        {"setup": "m", "state": "1", "scenario": "perfect.json", "trials": 0}]})");
    EXPECT_EQ(invoke({"compare", zero.string()}).code, cli::kExitUsage);
}

TEST(CliCompare, csv_quotes_awkward_names) {
    TempDir dir;
    std::ofstream(dir.path() / "perfect.json") << scenario_to_json(canonical::maudlin(BoundaryCondition::PerfectAbsorber)).dump();
    auto manifest = dir.write("ens.json", R"({"label": "x", "batches": "shared", "cells": [
        {"setup": "m, \"quoted\"", "state": "s", "scenario": "perfect.json", "trials": 10}]})");
    auto result = invoke({"compare", manifest.string(), "--format", "csv"});
    ASSERT_EQ(result.code, 0) << result.err;
    EXPECT_NE(result.out.find("\"m, \"\"quoted\"\"\",s,L,"), std::string::npos);
}
