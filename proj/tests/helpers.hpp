#pragma once

#include <doctest.h>

#include "pgreen/errors.hpp"

namespace pgreen_test {

// Runs f and checks that it throws pgreen::Error with the given code.
template <class F>
void expect_error(F&& f, pgreen::ErrorCode code) {
  bool hit = false;
  try {
    f();
  } catch (const pgreen::Error& e) {
    hit = (e.code() == code);
    if (!hit) MESSAGE("threw wrong code: " << e.what());
  } catch (const std::exception& e) {
    MESSAGE("threw non-library exception: " << e.what());
  }
  CHECK(hit);
}

}  // namespace pgreen_test
