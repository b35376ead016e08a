/*
 * Copyright 2026 The yaqa-round Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Property suites behind `yaqa verify` and the acceptance binary. Each
// criterion runs a fixed, seeded battery and reports failures as data.

#ifndef YAQA_VERIFY_HPP
#define YAQA_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace yaqa::verify
{

struct Options
{
  std::uint64_t seed = 0;         // offsets every instance seed
  bool corrupt_vec = false;       // negative control: oracle uses column-major vec
  unsigned threads = 1;
};

struct Check
{
  std::string name;
  bool pass = false;
  std::string detail;                 // measured values, or the first failure
  std::optional<std::uint64_t> seed;  // reproduces the first failure
};

struct CriterionReport
{
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  double budget_seconds = 0.0;

  bool passed() const;
};

/// Criteria 1..9.
CriterionReport run_criterion(int id, const Options &opt = {});
inline constexpr int kCriteria = 9;

/// Named suites map onto criteria: oracle {1}, snd {2}, bounds {3, 4},
/// sketch {5, 6}, kl {7}, ip {8}, model {9}, all {1..9}.
const std::vector<std::string> &suite_names();
std::vector<int> suite_criteria(const std::string &suite); // throws InvalidArgument

} // namespace yaqa::verify

#endif // YAQA_VERIFY_HPP
