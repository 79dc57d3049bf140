// Copyright 2026 The Tiers Authors. All Rights Reserved.
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

#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tiers/bundled.hpp"
#include "tiers/cli.hpp"
#include "tiers/recognizer.hpp"
#include "tiers/sentence_io.hpp"

namespace tiers {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  ::unsetenv("TIERS_CONFIG");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir() {
  static int counter = 0;
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() / ("tiers_cli_" + std::to_string(::getpid()) + "_" +
                                              info->name() + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Cli, PipelineWritesVerifiedSentences) {
  const fs::path dir = fresh_dir();
  const CliRun r = cli({"pipeline", "--grammar", "cfg", "--want", "50", "--seed", "7", "--out",
                     (dir / "cfg.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto sentences = read_sentences_file((dir / "cfg.jsonl").string(), bundled_grammar("cfg"));
  ASSERT_EQ(sentences.size(), 50u);
  for (const Sentence& s : sentences) {
    EXPECT_EQ(bundled_recognizer("cfg")(s.tokens).verdict, Verdict::kAccept);
  }
  const CliRun again = cli({"pipeline", "--grammar", "cfg", "--want", "50", "--seed", "7"});
  EXPECT_EQ(again.out, slurp(dir / "cfg.jsonl"));
}

TEST(Cli, UnknownSubcommandIsUsage) {
  const CliRun r = cli({"frobnicate"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"generate"}).code, 1);
}

TEST(Cli, HelpAndVersion) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  const CliRun v = cli({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out.rfind("tiers ", 0), 0u);
}

TEST(Cli, BenchWithoutCredentialsMakesNoCalls) {
  ::unsetenv("OPENAI_API_KEY");
  const fs::path dir = fresh_dir();
  {
    std::ofstream s(dir / "cfg.txt");
    s << "The dogs sleep\n";
    std::ofstream c(dir / "bench.json");
    c << R"({"store": "store", "sentences": {"cfg": "cfg.txt"},
             "models": [{"id": "gpt", "provider": "openai", "endpoint": "http://127.0.0.1:9"}]})";
  }
  const CliRun r = cli({"bench", "run", "--config", (dir / "bench.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("OPENAI_API_KEY"), std::string::npos);
  EXPECT_EQ(r.err.rfind("tiers bench run:", 0), 0u) << r.err;
  EXPECT_FALSE(fs::exists(dir / "store" / "trials.jsonl"));
}

TEST(Cli, MockBenchRunResumeAndStats) {
  const fs::path dir = fresh_dir();
  ASSERT_EQ(cli({"pipeline", "--grammar", "cfg", "--want", "3", "--out", (dir / "cfg.jsonl").string()})
                .code,
            0);
  {
    std::ofstream c(dir / "bench.json");
    c << R"({"seed": 1, "store": "store", "out": "stats", "sentences": {"cfg": "cfg.jsonl"},
             "models": [{"id": "m", "provider": "mock", "endpoint": "mock://1", "trials": 5}]})";
  }
  const std::string config = (dir / "bench.json").string();
  const CliRun run = cli({"bench", "run", "--config", config});
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(slurp(dir / "stats" / "stats.csv"),
            "model,grammar,mean,stderr,n_sentences,n_trials,n_unparseable\nm,cfg,1.000,0.000,3,15,0\n");
  EXPECT_EQ(cli({"bench", "run", "--config", config}).code, 2);
  EXPECT_EQ(cli({"bench", "resume", "--config", config}).code, 0);
  const CliRun emit = cli({"stats", "emit", "--store", (dir / "store").string(), "--out",
                        (dir / "again").string()});
  ASSERT_EQ(emit.code, 0) << emit.err;
  EXPECT_EQ(slurp(dir / "again" / "stats.csv"), slurp(dir / "stats" / "stats.csv"));
  EXPECT_EQ(cli({"stats", "emit", "--store", (dir / "empty").string(), "--out", (dir / "x").string()}).code,
            3);
}

TEST(Cli, RecognizeAndClassify) {
  const fs::path dir = fresh_dir();
  {
    std::ofstream s(dir / "in.txt");
    s << "A book the hat conjectures sleep proves inspects.\nThe dogs sleep\n";
  }
  const CliRun r = cli({"recognize", "--grammar", "csg", "--in", (dir / "in.txt").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("csg-1,csg,accept"), std::string::npos) << r.out;
  const CliRun c = cli({"classify", "--in", (dir / "in.txt").string()});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("cfg-1,csg,"), std::string::npos) << c.out;
  EXPECT_EQ(cli({"recognize", "--grammar", "xyz", "--in", (dir / "in.txt").string()}).code, 2);
  EXPECT_EQ(cli({"recognize", "--grammar", "cfg", "--in", (dir / "none.txt").string()}).code, 3);
}

TEST(Cli, GenerateIsDeterministic) {
  const CliRun a = cli({"generate", "--grammar", "ixg", "--count", "5", "--seed", "3"});
  const CliRun b = cli({"generate", "--grammar", "ixg", "--count", "5", "--seed", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 5);
  EXPECT_EQ(cli({"generate", "--grammar", "cfg", "--max-expansion", "0"}).code, 2);
}

TEST(Cli, ThalamoDemo) {
  const fs::path dir = fresh_dir();
  {
    std::ofstream t(dir / "tokens.txt");
    t << "happy dogs jump quickly time passed green ideas slept furiously\n";
  }
  const CliRun r = cli({"thalamo", "demo", "--tokens", (dir / "tokens.txt").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(r.out.empty());
  {
    std::ofstream t(dir / "empty.txt");
  }
  EXPECT_NE(cli({"thalamo", "demo", "--tokens", (dir / "empty.txt").string()}).code, 0);
}

}  // namespace
}  // namespace tiers
