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

#include "testing/oracles.h"

#include <cmath>
#include <set>

namespace rtdbias::testing {

std::map<std::string, double> BruteForceRanks(const CountMap& counts) {
  std::map<std::string, double> ranks;
  for (const auto& [word, count] : counts) {
    double above = 0;
    double same = 0;
    for (const auto& [other, other_count] : counts) {
      if (other_count > count) above += 1;
      if (other_count == count) same += 1;
    }
    ranks[word] = above + (same + 1.0) / 2.0;
  }
  return ranks;
}

OracleRtd DirectRtd(const CountMap& a, const CountMap& b, double alpha) {
  const auto ranks_a = BruteForceRanks(a);
  const auto ranks_b = BruteForceRanks(b);
  std::set<std::string> all;
  for (const auto& [w, c] : a) all.insert(w);
  for (const auto& [w, c] : b) all.insert(w);
  const double missing_a = static_cast<double>(all.size() - a.size());
  const double missing_b = static_cast<double>(all.size() - b.size());
  const double absent_a = static_cast<double>(a.size()) + (missing_a + 1) / 2;
  const double absent_b = static_cast<double>(b.size()) + (missing_b + 1) / 2;

  OracleRtd out;
  for (const std::string& w : all) {
    const double r1 = a.count(w) ? ranks_a.at(w) : absent_a;
    const double r2 = b.count(w) ? ranks_b.at(w) : absent_b;
    const double inner = std::fabs(1.0 / std::pow(r1, alpha) - 1.0 / std::pow(r2, alpha));
    const double d = (alpha + 1) / alpha * std::pow(inner, 1.0 / (alpha + 1));
    out.delta[w] = d;
    out.total += d;
  }
  return out;
}

double PearsonMcc(std::int64_t tp, std::int64_t fp, std::int64_t tn,
                  std::int64_t fn) {
  std::vector<double> pred;
  std::vector<double> truth;
  auto push = [&](std::int64_t n, double p, double t) {
    for (std::int64_t i = 0; i < n; ++i) {
      pred.push_back(p);
      truth.push_back(t);
    }
  };
  push(tp, 1, 1);
  push(fp, 1, 0);
  push(tn, 0, 0);
  push(fn, 0, 1);
  const double n = static_cast<double>(pred.size());
  double mp = 0, mt = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    mp += pred[i];
    mt += truth[i];
  }
  mp /= n;
  mt /= n;
  double cov = 0, vp = 0, vt = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    cov += (pred[i] - mp) * (truth[i] - mt);
    vp += (pred[i] - mp) * (pred[i] - mp);
    vt += (truth[i] - mt) * (truth[i] - mt);
  }
  if (vp == 0 || vt == 0) return 0.0;
  return cov / std::sqrt(vp * vt);
}

double ConcordanceAuc(const std::vector<double>& scores,
                      const std::vector<int>& labels) {
  double wins = 0;
  double pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1;
      if (scores[i] > scores[j]) {
        wins += 1;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

CountMap RandomCounts(std::mt19937_64& rng, int vocab, double keep,
                      int max_count) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, max_count);
  CountMap out;
  for (int i = 0; i < vocab; ++i) {
    if (coin(rng) >= keep) continue;
    std::string word = "w";
    word += static_cast<char>('a' + i / 26);
    word += static_cast<char>('a' + i % 26);
    out[word] = count(rng);
  }
  return out;
}

}  // namespace rtdbias::testing
