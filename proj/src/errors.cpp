#include "gyroproxy/errors.hpp"

namespace gyroproxy {

void throw_size_error(const std::string& what) { throw SizeError(what); }

}  // namespace gyroproxy
