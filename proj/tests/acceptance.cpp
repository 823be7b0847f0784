// Copyright 2026 The geodd Authors
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

// Acceptance run: one PASS/FAIL line per criterion at full scale.
// Exit status is the number of failed criteria.

#include <iostream>

#include "geodd/verification.hpp"

int main() {
  using namespace geodd::verification;
  const Scale scale{true, 1, 2024};
  int failed = 0;
  for (auto check : acceptance_checks()) {
    const CheckResult r = check(scale);
    std::cout << format_line(r) << std::endl;
    if (!r.passed) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " of 10 criteria failed" : std::string("all 10 criteria passed"))
            << std::endl;
  return failed;
}
