#pragma once

namespace funstack {

// Number of parallel workers: hardware concurrency (or OpenMP's max),
// capped by the FUNSTACK_THREADS environment variable when set.
int worker_count();

}  // namespace funstack
