// Copyright 2026 The lfu Authors
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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lfu::detail {

// Type-1 nonuniform transform by Gaussian gridding:
//   out[m] = sum_j c[j] * exp(i * (m - modes/2) * x[j]),  0 <= m < modes.
// Points x may be any reals; they are reduced mod 2 pi. Relative accuracy is
// around 1e-12 with the default spreading width.
std::vector<std::complex<double>> nufft1(std::span<const double> x,
                                         std::span<const std::complex<double>> c,
                                         std::size_t modes, int spread = 12);

}  // namespace lfu::detail
