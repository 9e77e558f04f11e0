#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgla {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class InsufficientSpectrum : public Error {
 public:
  using Error::Error;
};

class TooManyViews : public Error {
 public:
  using Error::Error;
};

class InfeasibleStart : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class ZeroVolume : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class EmptyGraph : public Error {
 public:
  using Error::Error;
};

class AsymmetryBeyondTolerance : public Error {
 public:
  using Error::Error;
};

// Eigensolver failed to reach the requested residual within its matvec cap.
class NoConvergence : public Error {
 public:
  NoConvergence(std::size_t matvecs, double worst_residual)
      : Error("eigensolver did not converge after " + std::to_string(matvecs) +
              " matvecs (worst residual " + std::to_string(worst_residual) + ")"),
        matvecs_(matvecs),
        worst_residual_(worst_residual) {}

  std::size_t matvecs() const { return matvecs_; }
  double worst_residual() const { return worst_residual_; }

 private:
  std::size_t matvecs_;
  double worst_residual_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace sgla
