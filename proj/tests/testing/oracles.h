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

#ifndef RTDBIAS_TESTS_TESTING_ORACLES_H_
#define RTDBIAS_TESTS_TESTING_ORACLES_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

// Slow, obviously-correct reference implementations used to check the
// library. Nothing here calls into rtdbias.
namespace rtdbias::testing {

using CountMap = std::map<std::string, std::int64_t>;

struct OracleRtd {
  std::map<std::string, double> delta;
  double total = 0.0;
};

// Average rank of every type by descending count, counting the types above
// and beside it one by one.
std::map<std::string, double> BruteForceRanks(const CountMap& counts);

// Rank-turbulence divergence summed term by term. A type missing from one
// system takes rank distinct + (missing + 1) / 2 there.
OracleRtd DirectRtd(const CountMap& a, const CountMap& b, double alpha);

// Phi coefficient computed as the Pearson correlation of explicit 0/1
// prediction and truth vectors; 0 when either vector is constant.
double PearsonMcc(std::int64_t tp, std::int64_t fp, std::int64_t tn,
                  std::int64_t fn);

// Probability that a random positive outscores a random negative, ties
// counting one half, by enumerating every pair.
double ConcordanceAuc(const std::vector<double>& scores,
                      const std::vector<int>& labels);

// Random counts over a fixed alphabet of `vocab` short words; each word is
// kept with probability `keep`.
CountMap RandomCounts(std::mt19937_64& rng, int vocab, double keep,
                      int max_count);

}  // namespace rtdbias::testing

#endif  // RTDBIAS_TESTS_TESTING_ORACLES_H_
