#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "takagi/errors.hpp"

namespace takagi {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense complex symmetric matrix (A = A^T, not Hermitian).
///
/// Construction checks ||A - A^T||_F <= symTol * ||A||_F and then stores
/// (A + A^T) / 2, so the held matrix is exactly symmetric.
class CSym {
 public:
  static constexpr double kDefaultSymTol = 1e-12;

  CSym() = default;
  explicit CSym(const CMatrix& a, double symTol = kDefaultSymTol);

  /// Builds from real and imaginary parts, A = B + iC.
  static CSym from_parts(const RMatrix& re, const RMatrix& im,
                         double symTol = kDefaultSymTol);

  Index n() const { return a_.rows(); }
  const CMatrix& matrix() const { return a_; }
  Complex operator()(Index i, Index j) const { return a_(i, j); }

  RMatrix real() const { return a_.real(); }
  RMatrix imag() const { return a_.imag(); }
  double norm() const { return a_.norm(); }

  CSym operator+(const CSym& o) const;
  CSym operator-(const CSym& o) const;
  CSym operator*(double s) const;

 private:
  struct Trusted {};
  CSym(CMatrix a, Trusted) : a_(std::move(a)) {}

  CMatrix a_;
};

/// Relative symmetry defect ||A - A^T||_F / max(||A||_F, tiny).
double symmetry_defect(const CMatrix& a);

}  // namespace takagi
