// Copyright 2026 The qbias Authors
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

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qbias {

/// Splits [0, total) into `workers` contiguous chunks and runs
/// fn(begin, end, worker_index) on each. Chunk boundaries depend only on
/// (total, workers); callers must make per-item work independent of the
/// chunking (derive_seed per item) to keep results worker-count invariant.
/// The first exception thrown by any worker is rethrown on the caller.
template <class Fn>
void parallel_chunks(std::size_t total, std::size_t workers, Fn &&fn) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(total, 1));
    if (workers == 1) {
        fn(std::size_t{0}, total, std::size_t{0});
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = total * w / workers;
        const std::size_t end = total * (w + 1) / workers;
        pool.emplace_back([&, begin, end, w] {
            try {
                fn(begin, end, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

/// Default worker count: hardware concurrency, at least one.
inline std::size_t default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

} // namespace qbias
