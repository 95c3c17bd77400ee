// Copyright 2026 The bchaos Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Deterministic fan-out over realization indices.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bchaos {

/// Worker count to use when the caller passes 0.
[[nodiscard]] inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) {
        return requested;
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

/**
 * @brief Evaluates f(index) for index in [begin, end) on a pool of threads.
 *
 * Indices are sharded round-robin. The result vector is ordered by index, so
 * any reduction over it in order is independent of the worker count. If
 * several calls throw, the exception of the smallest index is rethrown.
 */
template <class Result, class F>
std::vector<Result> map_indices(std::size_t begin, std::size_t end, unsigned workers, F &&f) {
    const std::size_t count = end > begin ? end - begin : 0;
    std::vector<Result> out(count);
    const unsigned k =
        static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1)));
    std::vector<std::exception_ptr> errors(count);

    auto run = [&](unsigned w) {
        for (std::size_t i = w; i < count; i += k) {
            try {
                out[i] = f(begin + i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (k <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(k);
        for (unsigned w = 0; w < k; ++w) {
            pool.emplace_back(run, w);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

} // namespace bchaos
