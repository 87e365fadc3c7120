/*
* Copyright 2026 The ope-kit Authors.
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     https://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
* ============================================================================
*/
// Built-in property checks run by `ope_kit selftest` and the acceptance
// binary. Each check compares the library against an independent
// computation or an exact algebraic identity.
#ifndef OPEKIT_SELFTEST_H_
#define OPEKIT_SELFTEST_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "opekit/harness.h"

namespace opekit {

struct PropertyResult {
  std::string name;
  bool passed = false;
  // Largest observed deviation and the bound it was held to.
  double deviation = 0.0;
  double tolerance = 0.0;
};

std::vector<PropertyResult> RunPropertySuite(std::uint64_t seed = 1);

// K Gaussian clusters in d dimensions: standard normal centers, isotropic
// noise of scale `spread`, row i labelled i mod K.
ClassificationData MakeBlobData(std::size_t n, std::size_t d, std::size_t num_classes,
                                double spread, std::uint64_t seed);

}  // namespace opekit

#endif  // OPEKIT_SELFTEST_H_
