#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace skilldiag {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor operand shapes do not conform to an operation's contract.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration value.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Metric is undefined for the given input.
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Unknown entity id.
class LookupError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void stream_all(std::ostringstream&) {}

template <typename T, typename... Rest>
void stream_all(std::ostringstream& os, const T& head, const Rest&... rest) {
  os << head;
  stream_all(os, rest...);
}

}  // namespace detail

/// Builds an error message from a sequence of streamable pieces.
template <typename... Parts>
std::string msg(const Parts&... parts) {
  std::ostringstream os;
  detail::stream_all(os, parts...);
  return os.str();
}

}  // namespace skilldiag
