#pragma once

#include <cstddef>
#include <functional>

namespace hlmf {

// Worker count for parallel_for. Defaults to THREADS from the environment
// when set, else hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

// Static contiguous partition of [0, n); fn(i) must only write to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hlmf
