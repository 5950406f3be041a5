#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mslab {

// Root of every error raised by the library. Callers that only need a
// message can catch this; the CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the admissible set (x outside I, k outside its range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Two objects that must share a partition do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Ulam rows could not be normalized.
class AssemblyError : public Error {
 public:
  using Error::Error;
};

// An iterative scheme ran out of budget. Carries the last iterate (bin
// masses, not necessarily normalized) and the last L1 change.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate,
                   double last_change)
      : Error(what), last_iterate_(std::move(last_iterate)),
        last_change_(last_change) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  double last_change() const noexcept { return last_change_; }

 private:
  std::vector<double> last_iterate_;
  double last_change_;
};

// The minorization certificate is requested for k >= k_*.
class OutOfRegimeError : public Error {
 public:
  OutOfRegimeError(const std::string& what, double k_star)
      : Error(what), k_star_(k_star) {}
  double k_star() const noexcept { return k_star_; }

 private:
  double k_star_;
};

// Lower envelope of h is too thin to carry a minorization.
class EnvelopeError : public Error {
 public:
  using Error::Error;
};

class InsufficientVisitsError : public Error {
 public:
  InsufficientVisitsError(const std::string& what, std::size_t visits)
      : Error(what), visits_(visits) {}
  std::size_t visits() const noexcept { return visits_; }

 private:
  std::size_t visits_;
};

// Rate fit could not find a usable window.
class DiagnosticError : public Error {
 public:
  enum class Kind { TooFast, TooSlow, TooFewPoints };
  DiagnosticError(const std::string& what, Kind kind) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class InputSizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace mslab
