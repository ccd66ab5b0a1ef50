#pragma once
#include <stdexcept>
#include <string>

namespace lrb {

// Exception taxonomy used across the library.  The C layer maps each type to
// a status code; everything else surfaces as an internal error.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct RankMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ZeroPropensity : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidSplit : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SingularBlock : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LevelOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lrb
