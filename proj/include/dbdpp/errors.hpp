#pragma once

#include <stdexcept>
#include <string>

namespace dbdpp {

// Invalid user input: malformed specs, bad grids, out-of-domain parameters.
// The command line tool maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A computation could not be carried out to the requested accuracy or hit a
// structural obstruction (real zero, singular matrix, ...).  Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// |E(x)| underflowed in a kernel denominator; x sits on (or numerically on)
// a real zero of E.
class RealZeroError : public NumericalError {
 public:
  explicit RealZeroError(const std::string& msg) : NumericalError(msg) {}
};

// Adjacent grid points are too far apart to track the winding of Arg E.
class UnwrapError : public NumericalError {
 public:
  explicit UnwrapError(const std::string& msg) : NumericalError(msg) {}
};

// The ODE integrator could not satisfy its error control (step underflow).
class SolverError : public NumericalError {
 public:
  explicit SolverError(const std::string& msg) : NumericalError(msg) {}
};

// A numerically built structure function failed |E(z)| > |E#(z)| upstairs.
class StructureViolation : public NumericalError {
 public:
  explicit StructureViolation(const std::string& msg) : NumericalError(msg) {}
};

// Discretized kernel produced eigenvalues outside [-tol, 1+tol]; usually the
// window or node count is inadequate for the requested kernel.
class EigenvalueRangeError : public NumericalError {
 public:
  explicit EigenvalueRangeError(const std::string& msg) : NumericalError(msg) {}
};

// Conditioning matrix K(q_i, q_j) is numerically singular.
class SingularConditioningError : public NumericalError {
 public:
  explicit SingularConditioningError(const std::string& msg)
      : NumericalError(msg) {}
};

// A Monte-Carlo normalizer came out nonpositive or non-finite.
class DegenerateEstimateError : public NumericalError {
 public:
  explicit DegenerateEstimateError(const std::string& msg)
      : NumericalError(msg) {}
};

}  // namespace dbdpp
