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

namespace lfu::detail {

std::size_t next_pow2(std::size_t n);

// In-place radix-2 transform of a power-of-two length sequence:
//   a[k] <- sum_j a[j] * exp(sign * 2 pi i j k / n), sign = +1 when `positive`.
// No normalization is applied in either direction.
void fft(std::span<std::complex<double>> a, bool positive);

}  // namespace lfu::detail
