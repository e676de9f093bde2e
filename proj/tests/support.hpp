#pragma once

#include <doctest.h>

#include <numbers>

#include "instanton/error.hpp"

// Runs expr and checks it throws instanton::Error with the given code.
#define CHECK_ERROR_CODE(expr, expected)                         \
  do {                                                           \
    bool thrown_ = false;                                        \
    try {                                                        \
      (void)(expr);                                              \
    } catch (const instanton::Error& e_) {                       \
      thrown_ = true;                                            \
      CHECK(e_.code() == instanton::ErrorCode::expected);        \
    }                                                            \
    CHECK_MESSAGE(thrown_, "expected " #expected " from " #expr); \
  } while (0)

namespace testing {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt2 = std::numbers::sqrt2;

inline doctest::Approx near(double value, double eps) { return doctest::Approx(value).epsilon(eps); }

}  // namespace testing
