#pragma once

namespace uqst {

/// Every shot-parallel kernel has a plain loop kept as the reference path.
/// Both must produce bit-identical output.
enum class Execution { serial, parallel };

/// Sets the OpenMP thread count for subsequent parallel kernels (no-op
/// without OpenMP). Returns the previous value.
int set_thread_count(int n);
int thread_count();

} // namespace uqst
