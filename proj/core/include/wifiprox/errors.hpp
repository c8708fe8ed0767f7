#pragma once

#include <stdexcept>
#include <string>

namespace wifiprox {

// Error families. The CLI maps each family to a distinct exit status.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing, unreadable, or unwritable.
class io_error : public error {
 public:
  using error::error;
};

// Input data violates a format or domain invariant.
class validation_error : public error {
 public:
  using error::error;
};

// Invalid parameters or configuration.
class config_error : public error {
 public:
  using error::error;
};

}  // namespace wifiprox
