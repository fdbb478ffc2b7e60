#pragma once

#include <stdexcept>
#include <string>

namespace relaylab {

/// Invalid argument or configuration. CLI exit code 2.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// A closed form or measured power ratio is undefined because the variances
/// feeding a denominator vanish. Carries a description of the vanished terms.
/// CLI exit code 3.
class DegenerateEstimation : public std::runtime_error {
 public:
  explicit DegenerateEstimation(const std::string& what) : std::runtime_error(what) {}
};

/// A linear solve or other numeric step exceeded its accuracy tolerance.
/// CLI exit code 4.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace relaylab
