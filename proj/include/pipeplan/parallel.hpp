#pragma once

namespace pipeplan {

/// Worker count to use: `requested` if positive, else PLANNER_THREADS if set,
/// else the OpenMP default. Always >= 1.
int resolve_threads(int requested = 0);

}  // namespace pipeplan
