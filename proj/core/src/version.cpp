#include "instanton/version.hpp"

namespace instanton {

const char* version() noexcept { return INSTANTON_VERSION; }

}  // namespace instanton
