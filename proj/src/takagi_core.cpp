#include "takagi/takagi_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef TAKAGI_USE_LAPACKE
#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

namespace takagi {

namespace {

struct Svd {
  CMatrix U;
  RVector sigma;
};

#ifdef TAKAGI_USE_LAPACKE

Svd complex_svd(const CMatrix& a, bool wantU) {
  const auto n = static_cast<lapack_int>(a.rows());
  CMatrix work = a;
  Svd out;
  out.sigma.resize(n);
  if (wantU) {
    out.U.resize(n, n);
    CMatrix vt(n, n);
    const lapack_int info =
        LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', n, n, work.data(), n, out.sigma.data(),
                       out.U.data(), n, vt.data(), n);
    if (info != 0) throw Error("zgesdd failed with info " + std::to_string(info));
  } else {
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', n, n, work.data(), n,
                                           out.sigma.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw Error("zgesdd failed with info " + std::to_string(info));
  }
  return out;
}

#else

Svd complex_svd(const CMatrix& a, bool wantU) {
  Svd out;
  if (wantU) {
    Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeFullU);
    out.U = svd.matrixU();
    out.sigma = svd.singularValues();
  } else {
    Eigen::BDCSVD<CMatrix> svd(a);
    out.sigma = svd.singularValues();
  }
  return out;
}

#endif

}  // namespace

void check_separation(const RVector& s, double tolDistinct) {
  const Index n = s.size();
  const double s1 = s(0);
  if (!(s1 > 0.0)) throw DegenerateInput(DegeneracyKind::RankDeficient, static_cast<int>(n), 0.0);
  const double smallest = s(n - 1) / s1;
  if (smallest <= tolDistinct)
    throw DegenerateInput(DegeneracyKind::RankDeficient, static_cast<int>(n), smallest);
  for (Index j = 0; j + 1 < n; ++j) {
    const double gap = (s(j) - s(j + 1)) / s1;
    if (gap <= tolDistinct)
      throw DegenerateInput(DegeneracyKind::Coalescent, static_cast<int>(j + 1), gap);
  }
}

RVector singular_values(const CMatrix& a) { return complex_svd(a, false).sigma; }

TakagiPair takagi_svd(const CSym& a, double tolDistinct) {
  const CMatrix& A = a.matrix();
  Svd svd = complex_svd(A, true);
  check_separation(svd.sigma, tolDistinct);

  // (W^* A conj(W))_kk = sigma_k e^{2 i phi_k}
  const CMatrix AWbar = A * svd.U.conjugate();
  const Index n = a.n();
  for (Index k = 0; k < n; ++k) {
    const Complex d = svd.U.col(k).dot(AWbar.col(k));
    Complex root = std::sqrt(d / std::abs(d));
    // principal branch: arg in (-pi/2, pi/2]
    if (root.real() == 0.0 && root.imag() < 0.0) root = -root;
    svd.U.col(k) *= root;
  }
  return {std::move(svd.U), std::move(svd.sigma)};
}

Doubled build_doubled(const CSym& a) {
  const Index n = a.n();
  Doubled d;
  d.M.resize(2 * n, 2 * n);
  const RMatrix B = a.real();
  const RMatrix C = a.imag();
  d.M.topLeftCorner(n, n) = B;
  d.M.topRightCorner(n, n) = C;
  d.M.bottomLeftCorner(n, n) = C;
  d.M.bottomRightCorner(n, n) = -B;
  return d;
}

TakagiPair takagi_from_doubled(const CSym& a, double tolDistinct) {
  const Index n = a.n();
  const Doubled d = build_doubled(a);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(d.M);
  if (es.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");

  // Eigen sorts ascending; the top n eigenpairs are the singular values.
  TakagiPair p;
  p.S.resize(n);
  p.U.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = 2 * n - 1 - k;
    p.S(k) = es.eigenvalues()(src);
    p.U.col(k).real() = es.eigenvectors().col(src).head(n);
    p.U.col(k).imag() = es.eigenvectors().col(src).tail(n);
  }
  check_separation(p.S, tolDistinct);
  return p;
}

TakagiPair takagi(const CSym& a, Backend backend, double tolDistinct) {
  return backend == Backend::Svd ? takagi_svd(a, tolDistinct)
                                 : takagi_from_doubled(a, tolDistinct);
}

Verification verify_takagi(const CSym& a, const TakagiPair& p) {
  const Index n = a.n();
  if (p.U.rows() != n || p.U.cols() != n || p.S.size() != n)
    throw DimensionMismatch("factor dimensions do not match the matrix");
  Verification v;
  const CMatrix recon = p.U * p.S.cast<Complex>().asDiagonal() * p.U.transpose();
  v.residual = (a.matrix() - recon).norm() /
               std::max(a.norm(), std::numeric_limits<double>::epsilon());
  v.unitarityDefect = (p.U.adjoint() * p.U - CMatrix::Identity(n, n)).norm();
  v.orderingOk = p.S(n - 1) >= 0.0;
  for (Index k = 0; k + 1 < n; ++k) v.orderingOk = v.orderingOk && p.S(k) >= p.S(k + 1);
  return v;
}

}  // namespace takagi
