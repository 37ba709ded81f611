/*
 Copyright 2026 The oogrisk Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef OOGRISK_PARALLEL_HPP
#define OOGRISK_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace oogrisk {

/// Number of workers to use when the caller asks for 0.
inline unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/**
 * @brief Runs body(i) for i in [0, count) on up to `workers` threads.
 *
 * Work items are claimed in index order. If bodies throw, the exception of the
 * lowest failing index is rethrown after all workers have stopped.
 */
inline void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
    if (workers == 0) workers = default_workers();
    if (workers > count) workers = static_cast<unsigned>(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::vector<std::exception_ptr> errors(count);
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || stop.load()) return;
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
                stop.store(true);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace oogrisk

#endif  // OOGRISK_PARALLEL_HPP
