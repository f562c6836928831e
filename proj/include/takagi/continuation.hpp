#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "takagi/takagi_core.hpp"

namespace takagi {

/// t in [0, 1] -> A(t). Only values are needed; derivatives are replaced
/// by finite differences inside the predictor.
using PathFunction = std::function<CSym(double)>;

/// Step-size and safeguard parameters of the predictor-corrector.
struct ContinuationControls {
  double tolstep = 1e-2;
  double hMin = 100.0 * std::numeric_limits<double>::epsilon();
  double hMax = 0.1;
  double hInit = 1.0 / 64.0;
  double tolDistinct = kDefaultTolDistinct;
  /// Minimum |Re diag(U_new^* U_pred)| for a sign to be trusted.
  double signFloor = 0.1;
  double tEnd = 1.0;
  Backend backend = Backend::Svd;
};

struct ContinuationState {
  double t = 0.0;
  TakagiPair pair;
  double h = 1.0 / 64.0;
};

struct OdeRhs {
  RVector Sdot;
  CMatrix H;  // skew-Hermitian, U' = U H
};

/// Right-hand side of the factor ODEs at a point of a smooth branch.
OdeRhs ode_rhs(const CMatrix& adot, const TakagiPair& pair,
               double tolDistinct = kDefaultTolDistinct);

/// Skew-Hermitian matrix built from the symmetric G = U^* X conj(U):
///   H_kk = i Im(G_kk) / (2 sigma_k),
///   H_kj = Re(G_kj) / (sigma_j - sigma_k) + i Im(G_kj) / (sigma_j + sigma_k),  k > j.
CMatrix skew_from_rotated(const CMatrix& g, const RVector& sigma, double tolDistinct);

struct Prediction {
  CMatrix U;
  RVector S;
  CMatrix H;  // the increment: U_pred = U (I + H)
};

/// Euler predictor toward A(t + h) using the difference A(t + h) - A(t).
Prediction predict(const TakagiPair& pair, const CSym& next,
                   double tolDistinct = kDefaultTolDistinct);

/// Column signs that align `fresh` with `reference`: z_k = sign Re(fresh_k^* ref_k),
/// sign(0) = +1. `overlap` receives the raw Re values when non-null.
std::vector<int> sign_alignment(const CMatrix& fresh, const CMatrix& reference,
                                RVector* overlap = nullptr);

void apply_signs(CMatrix& u, const std::vector<int>& z);

enum class StepOutcome { Accepted, Failure };

struct StepResult {
  ContinuationState state;
  StepOutcome outcome = StepOutcome::Failure;
  double rhoSigma = 0.0;
  double rhoU = 0.0;
  double rho = 0.0;
};

/// One predictor-corrector attempt from `state`. On Accepted the returned
/// state sits at t + h with sign-corrected factors and an updated h; on
/// Failure it keeps t and carries the reduced h. Throws StepFloor when the
/// step size drops below controls.hMin.
StepResult pc_step(const ContinuationState& state, const PathFunction& path,
                   const ContinuationControls& controls);

struct TraceRow {
  double t;
  RVector S;
  double h;
  double rho;
};

enum class PathStatus { Completed, HaltedNearDegeneracy };

struct PathResult {
  TakagiPair final;
  std::vector<TraceRow> trace;
  PathStatus status = PathStatus::Completed;
  double haltT = 0.0;
  int accepted = 0;
  int failed = 0;
};

/// Continues `initial` (a factorization of path(0)) to t = controls.tEnd.
PathResult continue_path(const PathFunction& path, const TakagiPair& initial,
                         const ContinuationControls& controls = {});

/// CSV with columns t, sigma_1..sigma_n, h, rho.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace takagi
