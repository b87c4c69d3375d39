#pragma once

#include <functional>

namespace switchsim {

// Worker cap: hardware concurrency, further capped by SWITCHSIM_THREADS.
int worker_count();

// Runs body(0..n-1), possibly across threads. Iterations must be independent;
// the first exception thrown by any iteration is rethrown after all join.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace switchsim
