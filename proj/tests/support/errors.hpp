#pragma once

#include <optional>

#include "qpmut/error.hpp"

namespace testing_qp {

// Kind of the qpmut::Error thrown by f, nullopt if nothing was thrown.
std::optional<qpmut::ErrorKind> kind_of(auto&& f) {
  try {
    f();
  } catch (const qpmut::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace testing_qp
