#pragma once

#include <stdexcept>
#include <string>

namespace bochner {

enum class ErrorKind {
  degenerate_metric,
  domain,
  unsupported_domain,
  differentiation,
  invalid_connection,
  config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bochner
