#pragma once

#include <stdexcept>
#include <string>

namespace gridroute {

/// Malformed or inconsistent input files (datasets, checkpoints, manifests).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Strict-mode layer assignment could not keep every edge overflow at zero.
class InfeasibleError : public std::runtime_error {
public:
  InfeasibleError(int net, const std::string& what)
      : std::runtime_error(what), net_(net) {}
  int net() const { return net_; }

private:
  int net_;
};

/// Random problem generation exhausted its retry budget.
class GenerationError : public std::runtime_error {
public:
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gridroute
