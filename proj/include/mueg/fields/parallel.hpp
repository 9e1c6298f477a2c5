#pragma once

#include <cstddef>
#include <functional>

namespace mueg {

void set_worker_count(int n);
int worker_count();

// Splits [0, n) into contiguous chunks, one per worker. Each index is visited once;
// callers write to disjoint slots and reduce afterwards for reproducible results.
void parallel_for(std::size_t n, const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace mueg
