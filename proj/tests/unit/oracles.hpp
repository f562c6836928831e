#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "takagi/ensemble.hpp"
#include "takagi/takagi_core.hpp"

namespace oracle {

using takagi::CMatrix;
using takagi::Complex;
using takagi::CSym;
using takagi::Index;
using takagi::RVector;

inline CSym random_sym(Index n, std::uint64_t seed, std::uint32_t tag = 0) {
  takagi::Stream rng(seed, tag, 0xabcd);
  return takagi::sample_matrix(n, rng).A;
}

// Singular values by one-sided Jacobi, independent of the library kernel.
inline RVector jacobi_sigma(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues();
}

inline double residual(const CSym& a, const CMatrix& u, const RVector& s) {
  return (a.matrix() - u * s.asDiagonal() * u.transpose()).norm() / a.norm();
}

// Largest |1 - |Re <u_k, v_k>|| over columns: zero iff columns agree up to sign.
inline double sign_mismatch(const CMatrix& u, const CMatrix& v) {
  double worst = 0.0;
  for (Index k = 0; k < u.cols(); ++k) {
    const Complex ip = u.col(k).dot(v.col(k));
    worst = std::max({worst, std::abs(1.0 - std::abs(ip.real())), std::abs(ip.imag())});
  }
  return worst;
}

}  // namespace oracle
