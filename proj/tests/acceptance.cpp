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

// Runs every acceptance criterion and prints one PASS/FAIL line each,
// followed by the individual checks. Exits non-zero if any criterion fails.

#include "yaqa/verify.hpp"

#include <cstdio>
#include <thread>

int main()
{
  using namespace yaqa::verify;
  Options opt;
  opt.threads = std::max(1u, std::thread::hardware_concurrency());
  int failed = 0;
  for (int id = 1; id <= kCriteria; ++id)
  {
    const auto r = run_criterion(id, opt);
    std::printf("criterion %d %s: %s (%.1f s)\n", r.id, r.title.c_str(), r.passed() ? "PASS" : "FAIL", r.seconds);
    for (const auto &c : r.checks)
    {
      std::printf("    [%s] %s: %s", c.pass ? "ok" : "FAIL", c.name.c_str(), c.detail.c_str());
      if (c.seed)
        std::printf(" (seed %llu)", static_cast<unsigned long long>(*c.seed));
      std::printf("\n");
    }
    std::fflush(stdout);
    failed += !r.passed();
  }
  std::printf("%d of %d criteria passed\n", kCriteria - failed, kCriteria);
  return failed ? 1 : 0;
}
