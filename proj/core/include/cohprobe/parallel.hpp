#pragma once

#include <cstddef>
#include <functional>

namespace cohprobe::parallel {

/// Worker count: COHPROBE_THREADS when set to a positive integer, otherwise
/// the number of hardware threads (at least 1).
unsigned thread_count();

/// Run body(i) for i in [0, n). Each index runs exactly once; callers write
/// results into slot i so the outcome does not depend on scheduling. The
/// first exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace cohprobe::parallel
