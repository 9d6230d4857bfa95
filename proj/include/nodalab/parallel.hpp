#pragma once

#include <functional>

namespace nodalab {

/// Worker count used by the scans; 1 means run inline.
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once and
/// callers write into slot i, so the result does not depend on scheduling.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace nodalab
