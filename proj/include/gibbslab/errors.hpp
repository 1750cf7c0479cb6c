#ifndef GIBBSLAB_ERRORS_HPP
#define GIBBSLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gibbslab {

// Bad configuration (inconsistent or malformed parameters, profiles, files).
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation exceeded its declared memory/size budget.
class resource_error : public std::runtime_error {
public:
  resource_error(const std::string& msg, std::size_t required)
      : std::runtime_error(msg), required_size(required) {}
  std::size_t required_size;
};

// Iterative solver failed to reach tolerance; carries the last residual.
class numeric_error : public std::runtime_error {
public:
  numeric_error(const std::string& msg, double residual)
      : std::runtime_error(msg), last_residual(residual) {}
  double last_residual;
};

// Input falls outside the regularity classes the method supports.
class unsupported_regime_error : public std::runtime_error {
public:
  explicit unsupported_regime_error(const std::string& msg) : std::runtime_error(msg) {}
};

class insufficient_data_error : public std::runtime_error {
public:
  explicit insufficient_data_error(const std::string& msg) : std::runtime_error(msg) {}
};

class estimation_failure : public std::runtime_error {
public:
  explicit estimation_failure(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gibbslab

#endif
