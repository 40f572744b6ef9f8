#pragma once

#include <optional>

namespace gyroproxy {

/// Environment variable consulted when no explicit thread count is given.
inline constexpr const char* kThreadsEnvVar = "GYROPROXY_THREADS";

/// Resolve the kernel thread count: an explicit flag wins over GYROPROXY_THREADS, which
/// wins over the runtime default. Non-positive or unparsable values are rejected.
int resolve_thread_count(std::optional<int> flag);

/// Apply a thread count to kernel-internal parallel regions. No-op without OpenMP.
void set_thread_count(int threads);

int thread_count();

}  // namespace gyroproxy
