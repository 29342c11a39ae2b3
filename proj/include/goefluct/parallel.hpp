#pragma once

#include <cstddef>
#include <functional>

namespace goefluct {

// Thread cap: GOE_FLUCT_THREADS if set (positive integer), else hardware
// concurrency. Read once per process.
int thread_cap();

// Static partition of [begin, end) across at most thread_cap() threads.
// Each index is processed exactly once; callers keep determinism by writing
// to per-index slots and reducing in index order afterwards.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace goefluct
