// Copyright 2026 The adtypes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adtypes/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace adtypes::cli {
namespace {

namespace fs = std::filesystem;

const std::string kFixtures = ADTYPES_FIXTURE_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "adtypes");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("adtypes_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }
  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

TEST_F(CliTest, SolveExampleOne) {
  const auto r = invoke({"solve", "--in", kFixtures + "/example1.json", "--out", path("sol.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto sol = Json::parse(read("sol.json"));
  EXPECT_EQ(sol["welfare"].get<double>(), 9.0);
  EXPECT_EQ(sol["assignment"][0]["type"].get<int>(), 1);
  EXPECT_EQ(sol["algorithm"], "adtypes");
}

TEST_F(CliTest, EveryAlgorithmAgreesOnExampleOne) {
  for (const char* algo : {"adtypes", "generic", "gapdp", "brute", "two-type"}) {
    const auto r = invoke({"solve", "--in", kFixtures + "/example1.json", "--algo", algo});
    ASSERT_EQ(r.code, kExitOk) << algo << ": " << r.err;
    EXPECT_EQ(Json::parse(r.out)["welfare"].get<double>(), 9.0) << algo;
  }
}

TEST_F(CliTest, TraceGoesToStderr) {
  const auto r = invoke({"solve", "--in", kFixtures + "/example1.json", "--trace"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.err, "phase=0 pops=1 delta=0 pathlen=1\nphase=1 pops=2 delta=1 pathlen=3\n");
}

TEST_F(CliTest, PriceVcgTwoBidders) {
  const auto r = invoke({"price", "--in", kFixtures + "/two_bidders.json", "--mechanism", "vcg"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto priced = Json::parse(r.out);
  EXPECT_EQ(priced["mechanism"], "vcg");
  ASSERT_EQ(priced["payments"].size(), 2u);
  EXPECT_EQ(priced["payments"][0]["pay"].get<double>(), 3.0);
  EXPECT_EQ(priced["payments"][1]["pay"].get<double>(), 0.0);
}

TEST_F(CliTest, PriceWithReserves) {
  write("r.json", R"({"reserves": [[8, 7]]})");
  const auto r = invoke({"price", "--in", kFixtures + "/two_bidders.json", "--mechanism", "reserve",
                         "--reserves", path("r.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto priced = Json::parse(r.out);
  ASSERT_EQ(priced["payments"].size(), 1u);
  EXPECT_EQ(priced["payments"][0]["pay"].get<double>(), 8.0);
}

TEST_F(CliTest, PriceMyersonGreedy) {
  const auto r = invoke({"price", "--in", kFixtures + "/greedy_tight_eps_0_25.json", "--mechanism", "myerson-greedy"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["mechanism"], "myerson-greedy");
}

TEST_F(CliTest, VerifyAcceptsSolverOutputAndRejectsCorruption) {
  ASSERT_EQ(invoke({"solve", "--in", kFixtures + "/example1.json", "--out", path("sol.json")}).code, kExitOk);
  auto ok = invoke({"verify", "--in", kFixtures + "/example1.json", "--sol", path("sol.json")});
  EXPECT_EQ(ok.code, kExitOk) << ok.err;

  auto sol = Json::parse(read("sol.json"));
  sol["duals"]["p"][0] = sol["duals"]["p"][0].get<double>() - 1;
  write("bad.json", sol.dump());
  const auto bad = invoke({"verify", "--in", kFixtures + "/example1.json", "--sol", path("bad.json")});
  EXPECT_EQ(bad.code, kExitInvalid);
  EXPECT_NE(bad.err.find("certificate"), std::string::npos);

  sol = Json::parse(read("sol.json"));
  sol["welfare"] = 10;
  write("lie.json", sol.dump());
  EXPECT_EQ(invoke({"verify", "--in", kFixtures + "/example1.json", "--sol", path("lie.json")}).code, kExitInvalid);
}

TEST_F(CliTest, VerifyChecksGapRules) {
  write("gap.json", R"({"num_slots": 2, "types": [{"name": "a", "values": [3, 2], "discounts": [1, 1]}], "gap": [[1]]})");
  write("sol.json", R"({"algorithm": "x", "welfare": 5, "assignment": [{"slot": 0, "type": 0, "rank": 0}, {"slot": 1, "type": 0, "rank": 1}], "duals": null})");
  const auto r = invoke({"verify", "--in", path("gap.json"), "--sol", path("sol.json")});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("gap"), std::string::npos);
}

TEST_F(CliTest, GapInstanceRejectedByHungarian) {
  write("gap.json", R"({"num_slots": 2, "types": [{"name": "a", "values": [3, 2], "discounts": [1, 1]}], "gap": [[1]]})");
  const auto r = invoke({"solve", "--in", path("gap.json")});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("use gapdp"), std::string::npos);
  EXPECT_EQ(invoke({"solve", "--in", path("gap.json"), "--algo", "gapdp"}).code, kExitOk);
}

TEST_F(CliTest, InvalidInstanceExitsOne) {
  write("bad.json", R"({"num_slots": 2, "types": [{"name": "a", "values": [1, 3], "discounts": [1, 1]}], "gap": null})");
  const auto r = invoke({"solve", "--in", path("bad.json")});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("values not non-increasing"), std::string::npos);
  EXPECT_EQ(invoke({"solve", "--in", path("missing.json")}).code, kExitInvalid);
}

TEST_F(CliTest, GuardRefusalExitsTwo) {
  ASSERT_EQ(invoke({"gen", "--family", "random", "--n", "12", "--k", "2", "--out", path("big.json")}).code, kExitOk);
  const auto r = invoke({"solve", "--in", path("big.json"), "--algo", "brute"});
  EXPECT_EQ(r.code, kExitGuard);
  EXPECT_NE(r.err.find("refused"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExit64) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"solve", "--in", "x.json", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"solve", "--in", "x.json", "--algo", "simplex"}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({"bench", "--sizes", "ten"}).code, kExitUsage);
}

TEST_F(CliTest, GenIsByteIdenticalPerSeed) {
  const auto a = invoke({"gen", "--family", "random", "--seed", "5"});
  const auto b = invoke({"gen", "--family", "random", "--seed", "5"});
  const auto c = invoke({"gen", "--family", "random", "--seed", "6"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST_F(CliTest, GenFamilies) {
  const auto tight = invoke({"gen", "--family", "greedy-tight", "--eps", "0.25"});
  ASSERT_EQ(tight.code, kExitOk);
  std::ifstream shipped(kFixtures + "/greedy_tight_eps_0_25.json");
  EXPECT_EQ(tight.out, std::string(std::istreambuf_iterator<char>(shipped), {}));

  write("g.txt", "3 3\n0 1\n1 2\n0 2\n");
  ASSERT_EQ(invoke({"gen", "--family", "mis", "--graph", path("g.txt"), "--out", path("mis.json")}).code, kExitOk);
  const auto mis = invoke({"solve", "--in", path("mis.json"), "--algo", "gapdp"});
  EXPECT_EQ(Json::parse(mis.out)["welfare"].get<double>(), 1.0);

  const auto assignment = invoke({"gen", "--family", "assignment", "--n", "4", "--out", path("a.json")});
  ASSERT_EQ(assignment.code, kExitOk);
  EXPECT_EQ(assignment.out.rfind("offset=", 0), 0u);
}

TEST_F(CliTest, BenchWritesCsv) {
  const auto r = invoke({"bench", "--sizes", "8x2,12", "--reps", "1", "--out", path("b.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto csv = read("b.csv");
  EXPECT_EQ(csv.rfind("n,k,solver,median_ms,welfare\n8,2,adtypes,", 0), 0u);
  EXPECT_NE(csv.find("\n12,4,generic,"), std::string::npos);
}

TEST(IoTest, InstanceRoundTrip) {
  Instance inst;
  inst.num_slots = 3;
  inst.types = {{"a", {5, 0.1, 0}, {1, 0.3, 0.1}}, {"b", {2, 1, 0}, {0.9, 0.9, 0.2}}};
  inst.gap = GapMatrix{{0, 1}, {2, 0}};
  const auto text = dump_json(instance_to_json(inst));
  const auto back = instance_from_json(Json::parse(text));
  EXPECT_EQ(back.types[0].discounts, inst.types[0].discounts);
  EXPECT_EQ(back.types[1].values, inst.types[1].values);
  EXPECT_EQ(back.gap, inst.gap);
  EXPECT_EQ(dump_json(instance_to_json(back)), text);
}

TEST(IoTest, DoublesRoundTripExactly) {
  Instance inst;
  inst.num_slots = 1;
  inst.types = {{"a", {0.1 + 0.2}, {1.0 / 3}}};
  const auto back = instance_from_json(Json::parse(dump_json(instance_to_json(inst))));
  EXPECT_EQ(back.types[0].values[0], 0.1 + 0.2);
  EXPECT_EQ(back.types[0].discounts[0], 1.0 / 3);
}

TEST(IoTest, ShortValueListsArePadded) {
  const auto inst = instance_from_json(Json::parse(R"({"num_slots": 3, "types": [{"values": [4], "discounts": [1, 1, 1]}]})"));
  EXPECT_EQ(inst.types[0].values, (std::vector<double>{4, 0, 0}));
  EXPECT_FALSE(inst.gap.has_value());
}

TEST(IoTest, MalformedJsonIsAValidationError) {
  EXPECT_THROW(instance_from_json(Json::parse(R"({"types": []})")), ValidationError);
  EXPECT_THROW(instance_from_json(Json::parse(R"({"num_slots": 1, "types": [{"values": "x", "discounts": [1]}]})")),
               ValidationError);
}

}  // namespace
}  // namespace adtypes::cli
