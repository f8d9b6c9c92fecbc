// Copyright 2026 The Airborne Authors
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

#include "tanh_kernel.h"

#include <algorithm>
#include <cmath>

namespace airborne::detail {

namespace {

constexpr long kBlock = 16;

// Fixed trip count over an aligned buffer: the loop vectorizes with no
// peeled or remainder iterations, so every element takes the same code path.
void tanh_block(double* __restrict b) {
#pragma omp simd aligned(b : 32)
  for (long i = 0; i < kBlock; ++i) b[i] = std::tanh(b[i]);
}

}  // namespace

// The vector and scalar tanh round differently, so the result of an element
// must not depend on its position or on the alignment of v. Elements are
// staged through one aligned block.
void tanh_inplace(double* v, long n) {
  alignas(64) double buf[kBlock];
  for (long i = 0; i < n; i += kBlock) {
    const long m = std::min(kBlock, n - i);
    std::copy(v + i, v + i + m, buf);
    std::fill(buf + m, buf + kBlock, 0.0);
    tanh_block(buf);
    std::copy(buf, buf + m, v + i);
  }
}

}  // namespace airborne::detail
