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

#ifndef AIRBORNE_SRC_TANH_KERNEL_H_
#define AIRBORNE_SRC_TANH_KERNEL_H_

namespace airborne::detail {

// v[i] = tanh(v[i]). Built in its own translation unit so the compiler can
// use the vectorized libm variant without relaxing math elsewhere.
void tanh_inplace(double* v, long n);

}  // namespace airborne::detail

#endif  // AIRBORNE_SRC_TANH_KERNEL_H_
