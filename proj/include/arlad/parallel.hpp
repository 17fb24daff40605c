#pragma once

#include <cstddef>
#include <functional>

namespace arlad {

/// Thread count used when a caller passes 0: the ARLAD_THREADS environment
/// variable if set to a positive integer, else the hardware concurrency.
unsigned default_thread_count();

/// Calls body(i) for every i in [0, count) on up to `threads` workers
/// (0 = default_thread_count()). Work is handed out dynamically, so body must
/// only write to slot i of pre-sized outputs. The first exception thrown by
/// any body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace arlad
