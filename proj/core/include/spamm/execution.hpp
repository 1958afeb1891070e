#pragma once
//
// Project     : spamm-ec
// Module      : execution
// Description : shared-memory parallelism knob for the recursive kernels
//

namespace spamm::exec {

/// Set the maximum number of worker threads used by the quadtree kernels
/// (multiplication, error sweep). Values < 1 are clamped to 1.
///
/// All kernels join their subtasks in a fixed operand order, so results are
/// bitwise identical for every thread count; this knob only affects wall time.
void set_max_threads(int threads);

int max_threads() noexcept;

/// Number of quadtree levels, counted from the root, at which the recursive
/// kernels spawn asynchronous subtasks. Derived from max_threads (each level
/// branches four ways); 0 means fully sequential.
int spawn_levels() noexcept;

}  // namespace spamm::exec
