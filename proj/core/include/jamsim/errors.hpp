#pragma once

#include <stdexcept>
#include <string>

namespace jamsim {

// Rejected constructor/operation arguments (bad N, c, dt, p, ...).
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A tabular pmf that fails validation (row sum, negative mass, support).
struct MalformedTable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The fluid path never reached the absorption level within the horizon.
struct NoHitting : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// |1 - drift(1)| is numerically zero; the hitting-time CLT is undefined.
struct DegenerateNormalization : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The diffusion rate went genuinely negative inside the simulated window.
struct NegativeDiffusion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A batch statistic was requested on fewer records than it needs.
struct InsufficientSample : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Config file / CLI input that fails strict parsing.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace jamsim
