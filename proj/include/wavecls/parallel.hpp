// Copyright 2026 The wavecls Authors. All Rights Reserved.
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
#ifndef WAVECLS_PARALLEL_HPP_
#define WAVECLS_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace wavecls {

/// Worker cap from WAVECLS_THREADS. Unset means one worker per hardware
/// thread; 0 means run serially on the calling thread.
std::size_t worker_count();

/// Calls fn(i) for every i in [0, n). Each index is handled exactly once,
/// so results written per index are independent of scheduling. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wavecls

#endif  // WAVECLS_PARALLEL_HPP_
