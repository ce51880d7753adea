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

#ifndef RTDBIAS_RANKING_H_
#define RTDBIAS_RANKING_H_

#include <span>
#include <vector>

namespace rtdbias {

// Fractional ("average") ranks of `values` ordered from largest to smallest:
// the largest value gets rank 1 and every group of exactly-equal values
// shares the arithmetic mean of the positions it spans. The ranks of M
// values always sum to M(M+1)/2.
std::vector<double> FractionalRanksDescending(std::span<const double> values);

}  // namespace rtdbias

#endif  // RTDBIAS_RANKING_H_
