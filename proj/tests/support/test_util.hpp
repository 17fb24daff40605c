#pragma once

#include "arlad/error.hpp"

#include <doctest.h>

#include <optional>

namespace testutil {

template <class F>
std::optional<arlad::ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const arlad::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testutil

#define CHECK_ERROR_CODE(expr, expected)                                        \
  do {                                                                          \
    const auto code_ = testutil::error_code_of([&] { (void)(expr); });          \
    CHECK_MESSAGE(code_.has_value(), "expected an arlad::Error from " #expr);   \
    if (code_) CHECK(*code_ == (expected));                                     \
  } while (0)
