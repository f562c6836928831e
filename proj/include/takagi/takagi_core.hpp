#pragma once

#include "takagi/matrix.hpp"

namespace takagi {

/// A = U diag(S) U^T with U unitary and S sorted descending, S >= 0.
struct TakagiPair {
  CMatrix U;
  RVector S;

  Index n() const { return S.size(); }
};

/// Real symmetric 2n x 2n embedding M = [B C; C -B] of A = B + iC.
/// Its spectrum is {sigma_j} together with {-sigma_j}.
struct Doubled {
  RMatrix M;

  Index n() const { return M.rows() / 2; }
  RMatrix upper_left() const { return M.topLeftCorner(n(), n()); }
  RMatrix upper_right() const { return M.topRightCorner(n(), n()); }
  RMatrix lower_left() const { return M.bottomLeftCorner(n(), n()); }
  RMatrix lower_right() const { return M.bottomRightCorner(n(), n()); }
};

/// Which kernel computes a single Takagi factorization.
enum class Backend { Svd, Doubled };

inline constexpr double kDefaultTolDistinct = 1e-8;

/// Takagi factorization from the SVD A = W Sigma V^*: the left factor is
/// rotated by the principal square root of diag(W^* A conj(W)) / sigma.
///
/// Throws DegenerateInput when sigma_n <= tolDistinct * sigma_1 or some gap
/// sigma_j - sigma_{j+1} <= tolDistinct * sigma_1.
TakagiPair takagi_svd(const CSym& a, double tolDistinct = kDefaultTolDistinct);

Doubled build_doubled(const CSym& a);

/// Takagi factorization from the n largest eigenpairs of the doubled matrix:
/// M [X; Y] = [X; Y] S gives U = X + iY.
TakagiPair takagi_from_doubled(const CSym& a, double tolDistinct = kDefaultTolDistinct);

/// Dispatches to takagi_svd or takagi_from_doubled.
TakagiPair takagi(const CSym& a, Backend backend, double tolDistinct = kDefaultTolDistinct);

struct Verification {
  double residual = 0.0;         // ||A - U S U^T||_F / max(||A||_F, eps)
  double unitarityDefect = 0.0;  // ||U^* U - I||_F
  bool orderingOk = false;
};

Verification verify_takagi(const CSym& a, const TakagiPair& p);

/// Throws DegenerateInput if `s` (sorted descending) violates the
/// separation thresholds relative to s(0).
void check_separation(const RVector& s, double tolDistinct);

/// Singular values of a general complex matrix, descending. Uses the
/// configured SVD kernel; exposed for oracles and histograms.
RVector singular_values(const CMatrix& a);

}  // namespace takagi
