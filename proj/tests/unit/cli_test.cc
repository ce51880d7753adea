// Copyright 2026 The rtdbias Authors.
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rtdbias_cli_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the CLI with stdout and stderr captured to files; returns the exit
  // status.
  int Run(const std::string& args) {
    const std::string cmd = std::string(RTDBIAS_CLI_PATH) + " " + args + " --out-dir " +
                            dir_.string() + " > " + (dir_ / "stdout").string() + " 2> " +
                            (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  }

  std::string Read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, SynthRtdTrimRoundTrip) {
  ASSERT_EQ(Run("synth --n-docs 120 --seed 2"), 0);
  const std::string corpus = (dir_ / "synthetic.jsonl").string();
  ASSERT_EQ(Run("rtd -i " + corpus), 0);
  EXPECT_TRUE(fs::exists(dir_ / "divergence.tsv"));
  EXPECT_TRUE(fs::exists(dir_ / "allotaxonograph.json"));
  ASSERT_EQ(Run("trim -i " + corpus + " --levels 0.1,0.3"), 0);
  EXPECT_TRUE(fs::exists(dir_ / "trimmed_0.10.jsonl"));
  EXPECT_TRUE(fs::exists(dir_ / "trimmed_0.30.jsonl"));
  EXPECT_TRUE(fs::exists(dir_ / "lengths_0.30.csv"));
  ASSERT_EQ(Run("rank -i " + corpus), 0);
  EXPECT_TRUE(fs::exists(dir_ / "rank_A.tsv"));
  ASSERT_EQ(Run("ingest -i " + corpus), 0);
  EXPECT_EQ(Read("corpus.jsonl"), Read("synthetic.jsonl"));
}

TEST_F(CliTest, SweepAndReport) {
  ASSERT_EQ(Run("synth --n-docs 200 --seed 3"), 0);
  {
    std::ofstream cfg(dir_ / "sweep.json");
    cfg << R"({"tasks": [{"name": "class", "kind": "class_label"}],
               "trim_levels": [0.2], "classifier": {"l2_lambda": 0.01}})";
  }
  ASSERT_EQ(Run("sweep --config " + (dir_ / "sweep.json").string() + " -i " +
                (dir_ / "synthetic.jsonl").string()),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "eval.csv"));
  ASSERT_EQ(Run("report"), 0);
  EXPECT_NE(Read("stdout").find("class"), std::string::npos);
}

TEST_F(CliTest, EmbedBiasAndRtd2) {
  {
    std::ofstream corpus(dir_ / "c.jsonl");
    corpus << R"({"id":"1","text":"she her nurse","class_label":"A"})" << '\n'
           << R"({"id":"2","text":"he his doctor","class_label":"B"})" << '\n';
    std::ofstream vectors(dir_ / "v.txt");
    vectors << "she 1 0\nher 0.9 0.1\nhe 0 1\nhis 0.1 0.9\nnurse 0.8 0.3\ndoctor 0.2 0.7\n";
    std::ofstream clusters(dir_ / "k.json");
    clusters << R"({"cluster_a": ["she", "her"], "cluster_b": ["he", "his"]})";
  }
  const std::string common = " -i " + (dir_ / "c.jsonl").string() + " --vectors " +
                             (dir_ / "v.txt").string() + " --clusters " +
                             (dir_ / "k.json").string();
  ASSERT_EQ(Run("embed-bias" + common), 0);
  EXPECT_TRUE(fs::exists(dir_ / "bias.tsv"));
  EXPECT_TRUE(fs::exists(dir_ / "bias_histogram.csv"));
  ASSERT_EQ(Run("rtd2" + common), 0);
  EXPECT_EQ(Read("rtd2.tsv").substr(0, 4), "term");
}

TEST_F(CliTest, PreprocessWithRules) {
  {
    std::ofstream corpus(dir_ / "c.csv");
    corpus << "id,text,class_label,task_labels,group_id,doc_type\n"
           << "1,Pt weighs 80 kg,A,,g1,nursing\n"
           << "2,Seen 01/02/2010,B,,g1,radiology\n";
    std::ofstream rules(dir_ / "rules.cfg");
    rules << "remove_numbers = true\nremove_dates = true\nlowercase = true\n"
          << "abbrev.pt = patient\n";
  }
  ASSERT_EQ(Run("preprocess -i " + (dir_ / "c.csv").string() + " --rules " +
                (dir_ / "rules.cfg").string() + " --doc-type nursing"),
            0);
  const auto doc = nlohmann::json::parse(Read("preprocessed.jsonl"));
  EXPECT_EQ(doc["text"], "patient weighs kg");
}

TEST_F(CliTest, ErrorsAreMachineReadable) {
  EXPECT_NE(Run("rtd -i " + (dir_ / "missing.jsonl").string()), 0);
  auto err = nlohmann::json::parse(Read("stderr"));
  EXPECT_EQ(err["error"]["code"], "io_error");
  {
    std::ofstream bad(dir_ / "bad.jsonl");
    bad << R"({"id":"1","text":"x"})" << '\n';
  }
  EXPECT_NE(Run("ingest -i " + (dir_ / "bad.jsonl").string()), 0);
  err = nlohmann::json::parse(Read("stderr"));
  EXPECT_EQ(err["error"]["code"], "parse_error");
  EXPECT_NE(err["error"]["message"].get<std::string>().find("line 1"), std::string::npos);
  EXPECT_NE(Run("rtd"), 0);
  err = nlohmann::json::parse(Read("stderr"));
  EXPECT_EQ(err["error"]["code"], "usage");
}

}  // namespace
