#pragma once

#include <stdexcept>
#include <string>

namespace takagi {

/// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSymmetric : public Error {
 public:
  explicit NotSymmetric(double defect);
  double defect() const { return defect_; }

 private:
  double defect_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

enum class DegeneracyKind { Coalescent, RankDeficient };

/// Raised when singular values are too close (or too small) for a unique
/// Takagi factor. `pair()` is 1-based: Coalescent(j) means sigma_j ~ sigma_{j+1}.
class DegenerateInput : public Error {
 public:
  DegenerateInput(DegeneracyKind kind, int pair, double gap);
  DegeneracyKind kind() const { return kind_; }
  int pair() const { return pair_; }
  double gap() const { return gap_; }

 private:
  DegeneracyKind kind_;
  int pair_;
  double gap_;
};

/// Continuation step size fell below the floor; a degeneracy is close.
class StepFloor : public Error {
 public:
  StepFloor(double t, double h);
  double t() const { return t_; }
  double h() const { return h_; }

 private:
  double t_;
  double h_;
};

class NotUnitary : public Error {
 public:
  explicit NotUnitary(double defect);
};

class OutOfSupport : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class AllZeroCounts : public Error {
 public:
  using Error::Error;
};

/// Text-format parse failure; `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace takagi
