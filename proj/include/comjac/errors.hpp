#pragma once

#include <stdexcept>
#include <string>

namespace comjac {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input inside the degeneracy threshold (p = q, p + q = 0, |k| ~ 0, ...).
class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& what) : Error("degenerate input: " + what) {}
};

/// A mathematically impossible value showed up (precision failure).
class NumericInconsistency : public Error {
 public:
  explicit NumericInconsistency(const std::string& what)
      : Error("numeric inconsistency: " + what) {}
};

/// Bisection endpoints do not bracket a sign change.
class NoSignChange : public Error {
 public:
  explicit NoSignChange(const std::string& what) : Error("no sign change: " + what) {}
};

/// A bisection path kept hitting the p = q discontinuity after re-jittering.
class DiscontinuityCrossing : public Error {
 public:
  explicit DiscontinuityCrossing(const std::string& what)
      : Error("discontinuity crossing: " + what) {}
};

/// Bisection exhausted its step budget before meeting both stop criteria.
class BisectionStall : public Error {
 public:
  explicit BisectionStall(const std::string& what) : Error("bisection stall: " + what) {}
};

/// Rejection sampling exceeded its retry budget.
class SamplingExhausted : public Error {
 public:
  explicit SamplingExhausted(const std::string& what) : Error("sampling exhausted: " + what) {}
};

/// Finite-difference perturbation left the admissible set.
class InadmissiblePerturbation : public Error {
 public:
  explicit InadmissiblePerturbation(const std::string& what)
      : Error("inadmissible perturbation: " + what) {}
};

/// Dataset operations on an empty dataset.
class EmptyDataset : public Error {
 public:
  explicit EmptyDataset(const std::string& what) : Error("empty dataset: " + what) {}
};

/// File I/O failure, carries path context.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("i/o error: " + what) {}
};

}  // namespace comjac
