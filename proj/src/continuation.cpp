#include "takagi/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace takagi {

CMatrix skew_from_rotated(const CMatrix& g, const RVector& sigma, double tolDistinct) {
  check_separation(sigma, tolDistinct);
  const Index n = sigma.size();
  CMatrix h = CMatrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    h(k, k) = Complex(0.0, g(k, k).imag() / (2.0 * sigma(k)));
    for (Index j = 0; j < k; ++j) {
      const Complex hkj(g(k, j).real() / (sigma(j) - sigma(k)),
                        g(k, j).imag() / (sigma(j) + sigma(k)));
      h(k, j) = hkj;
      h(j, k) = -std::conj(hkj);
    }
  }
  return h;
}

OdeRhs ode_rhs(const CMatrix& adot, const TakagiPair& pair, double tolDistinct) {
  if (adot.rows() != pair.n() || adot.cols() != pair.n())
    throw DimensionMismatch("derivative and factors differ in size");
  const CMatrix g = pair.U.adjoint() * adot * pair.U.conjugate();
  OdeRhs out;
  out.H = skew_from_rotated(g, pair.S, tolDistinct);
  out.Sdot = g.diagonal().real();
  return out;
}

Prediction predict(const TakagiPair& pair, const CSym& next, double tolDistinct) {
  if (next.n() != pair.n()) throw DimensionMismatch("next matrix and factors differ in size");
  const CMatrix au = pair.U.adjoint() * next.matrix() * pair.U.conjugate();
  Prediction p;
  p.H = skew_from_rotated(au, pair.S, tolDistinct);
  p.U = pair.U + pair.U * p.H;
  p.S = au.diagonal().real();
  return p;
}

std::vector<int> sign_alignment(const CMatrix& fresh, const CMatrix& reference,
                                RVector* overlap) {
  const Index n = fresh.cols();
  std::vector<int> z(static_cast<std::size_t>(n));
  if (overlap) overlap->resize(n);
  for (Index k = 0; k < n; ++k) {
    const double d = fresh.col(k).dot(reference.col(k)).real();
    z[static_cast<std::size_t>(k)] = d < 0.0 ? -1 : 1;
    if (overlap) (*overlap)(k) = d;
  }
  return z;
}

void apply_signs(CMatrix& u, const std::vector<int>& z) {
  for (Index k = 0; k < u.cols(); ++k)
    if (z[static_cast<std::size_t>(k)] < 0) u.col(k) = -u.col(k);
}

StepResult pc_step(const ContinuationState& state, const PathFunction& path,
                   const ContinuationControls& c) {
  if (state.h < c.hMin) throw StepFloor(state.t, state.h);

  StepResult r;
  r.state = state;
  const double remaining = c.tEnd - state.t;
  if (remaining <= 0.0) {
    r.outcome = StepOutcome::Accepted;
    return r;
  }
  const bool lastStep = state.h >= remaining;
  const double h = lastStep ? remaining : state.h;
  const double tNew = lastStep ? c.tEnd : state.t + h;

  auto fail = [&](double hNew) {
    if (hNew < c.hMin) throw StepFloor(state.t, hNew);
    r.state.h = hNew;
    r.outcome = StepOutcome::Failure;
    return r;
  };

  const CSym next = path(tNew);
  const Prediction pred = predict(state.pair, next, c.tolDistinct);

  TakagiPair fresh;
  try {
    fresh = takagi(next, c.backend, c.tolDistinct);
  } catch (const DegenerateInput&) {
    return fail(h / 2.0);
  }

  RVector overlap;
  const auto z = sign_alignment(fresh.U, pred.U, &overlap);
  if (overlap.cwiseAbs().minCoeff() < c.signFloor) return fail(h / 2.0);
  apply_signs(fresh.U, z);

  const Index n = fresh.n();
  r.rhoU = (fresh.U - pred.U).norm() / std::sqrt(static_cast<double>(n));
  r.rhoSigma = ((fresh.S - pred.S).cwiseAbs().array() / (fresh.S.cwiseAbs().array() + 1.0))
                   .maxCoeff();
  r.rho = std::max(r.rhoSigma, r.rhoU) / c.tolstep;

  double hNew = r.rho > 0.0 ? h / r.rho : 2.0 * h;
  hNew = std::min({hNew, 2.0 * h, c.hMax});
  if (r.rho > 1.5) return fail(hNew);

  // Secant look-ahead on the singular values at t_new + h.
  const RVector sdot = (fresh.S - state.pair.S) / (tNew - state.t);
  const RVector sec = fresh.S + hNew * sdot;
  bool crossing = false;
  double hSec = std::numeric_limits<double>::infinity();
  for (Index j = 0; j + 1 < n; ++j) {
    if (sec(j) < sec(j + 1)) {
      crossing = true;
      const double denom = sdot(j + 1) - sdot(j);
      if (denom > 0.0) hSec = std::min(hSec, (fresh.S(j) - fresh.S(j + 1)) / denom);
    }
  }
  if (crossing) hNew = std::min(hNew / 2.0, 0.9 * hSec);
  if (fresh.S(n - 1) + hNew * sdot(n - 1) < 0.0)
    hNew = std::min(hNew / 2.0, 0.9 * fresh.S(n - 1) / std::abs(sdot(n - 1)));

  r.state = ContinuationState{tNew, std::move(fresh), hNew};
  r.outcome = StepOutcome::Accepted;
  return r;
}

PathResult continue_path(const PathFunction& path, const TakagiPair& initial,
                         const ContinuationControls& c) {
  PathResult out;
  ContinuationState state{0.0, initial, std::min(c.hInit, c.hMax)};
  out.trace.push_back({0.0, initial.S, state.h, 0.0});
  while (state.t < c.tEnd) {
    StepResult r;
    try {
      r = pc_step(state, path, c);
    } catch (const StepFloor&) {
      out.status = PathStatus::HaltedNearDegeneracy;
      out.haltT = state.t;
      break;
    }
    if (r.outcome == StepOutcome::Accepted) {
      ++out.accepted;
      out.trace.push_back({r.state.t, r.state.pair.S, r.state.h, r.rho});
    } else {
      ++out.failed;
    }
    state = std::move(r.state);
  }
  out.final = std::move(state.pair);
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os.precision(17);
  const Index n = trace.empty() ? 0 : trace.front().S.size();
  os << "t";
  for (Index k = 1; k <= n; ++k) os << ",sigma" << k;
  os << ",h,rho\n";
  for (const auto& row : trace) {
    os << row.t;
    for (Index k = 0; k < n; ++k) os << ',' << row.S(k);
    os << ',' << row.h << ',' << row.rho << '\n';
  }
  out << os.str();
}

}  // namespace takagi
