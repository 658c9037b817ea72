#pragma once

#include <stdexcept>
#include <string>

namespace agekit {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input: parameter constraints, scenario schema, unsupported requests.
// The CLI maps this to exit code 2.
struct validation_error : error {
  using error::error;
};

// A should-be-unreachable numerical condition (e.g. a root of the
// generating-function denominator with modulus <= 1). Surfaced, never
// clamped. CLI exit code 3.
struct internal_error : error {
  using error::error;
};

// A simulation budget that produced no usable samples. CLI exit code 4.
struct insufficient_samples_error : error {
  using error::error;
};

struct unsupported_order_error : validation_error {
  using validation_error::validation_error;
};

// Truncated-sum oracle called on a table whose tail bound is too large.
struct insufficient_horizon_error : validation_error {
  using validation_error::validation_error;
};

// General-penalty summation that cannot meet its tail tolerance.
struct divergence_error : validation_error {
  using validation_error::validation_error;
};

}  // namespace agekit
