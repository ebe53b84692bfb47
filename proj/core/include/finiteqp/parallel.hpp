#pragma once

#include <cstddef>
#include <functional>

namespace finiteqp {

/// Worker count: FINITEQP_THREADS if set, hardware concurrency otherwise.
int worker_count();

/// Runs fn(i) for i in [0, n) across the worker pool. fn must be safe to
/// call concurrently for distinct i; result collection is the caller's job
/// (index-addressed output slots keep reductions deterministic).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace finiteqp
