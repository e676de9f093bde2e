#pragma once

namespace instanton {

const char* version() noexcept;

}  // namespace instanton
