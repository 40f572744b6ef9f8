#include "gyroproxy/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

#include "gyroproxy/errors.hpp"

#ifdef GYROPROXY_HAVE_OPENMP
#include <omp.h>
#endif

namespace gyroproxy {

namespace {

int parse_positive(std::string_view text, std::string_view source) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 1) {
    throw ParameterError(std::string(source) + ": thread count must be a positive integer, got '" +
                         std::string(text) + "'");
  }
  return value;
}

}  // namespace

int resolve_thread_count(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw ParameterError("--threads must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv(kThreadsEnvVar); env != nullptr && *env != '\0') {
    return parse_positive(env, kThreadsEnvVar);
  }
  return thread_count();
}

void set_thread_count(int threads) {
  if (threads < 1) throw ParameterError("thread count must be >= 1");
#ifdef GYROPROXY_HAVE_OPENMP
  omp_set_num_threads(threads);
#endif
}

int thread_count() {
#ifdef GYROPROXY_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace gyroproxy
