#include <cmath>
#include <numbers>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "takagi/continuation.hpp"
#include "takagi/ensemble.hpp"

using namespace takagi;
using Catch::Matchers::WithinAbs;
using std::numbers::pi;

namespace {

CSym scalar(Complex v) {
  CMatrix a(1, 1);
  a(0, 0) = v;
  return CSym(a);
}

TakagiPair identity_pair(Index n) {
  return {CMatrix::Identity(n, n), RVector::Ones(n)};
}

// A(t) = field(x0 + t dx, y0 + t dy) for a seeded trigonometric field.
struct TrigLine {
  TrigField f;
  double x0, y0, dx, dy;
  CSym at(double t) const { return f.eval(x0 + t * dx, y0 + t * dy); }
  CMatrix deriv(double t) const {
    return (f.ddx(x0 + t * dx, y0 + t * dy) * dx + f.ddy(x0 + t * dx, y0 + t * dy) * dy).matrix();
  }
};

TrigLine trig_line(Index n, std::uint64_t seed) {
  return {make_field(n, seed), 0.4, 0.9, 0.7, -0.3};
}

TakagiPair aligned(const CSym& a, const CMatrix& ref) {
  auto p = takagi_svd(a);
  apply_signs(p.U, sign_alignment(p.U, ref));
  return p;
}

}  // namespace

TEST_CASE("ode_rhs: zero motion has zero rates") {
  const auto r = ode_rhs(CMatrix::Zero(3, 3), {CMatrix::Identity(3, 3), RVector::LinSpaced(3, 3, 1)});
  CHECK(r.Sdot.isZero());
  CHECK(r.H.isZero());
}

TEST_CASE("ode_rhs: diag(2 + t, 1) moves only sigma_1") {
  CMatrix adot = CMatrix::Zero(2, 2);
  adot(0, 0) = 1.0;
  TakagiPair p{CMatrix::Identity(2, 2), RVector(2)};
  p.S << 2.0, 1.0;
  const auto r = ode_rhs(adot, p);
  CHECK(r.Sdot(0) == 1.0);
  CHECK(r.Sdot(1) == 0.0);
  CHECK(r.H.isZero());
}

TEST_CASE("ode_rhs output is skew-Hermitian and matches central differences") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto line = trig_line(6, seed);
    const double t = 0.3;
    const auto p = takagi_svd(line.at(t));
    const auto r = ode_rhs(line.deriv(t), p);
    CHECK((r.H + r.H.adjoint()).norm() < 1e-14);

    double prev = 0.0;
    for (double h : {1e-2, 1e-3}) {
      const auto plus = aligned(line.at(t + h), p.U);
      const auto minus = aligned(line.at(t - h), p.U);
      const double eU = ((plus.U - minus.U) / (2 * h) - p.U * r.H).norm();
      const double eS = ((plus.S - minus.S) / (2 * h) - r.Sdot).norm();
      const double e = std::max(eU, eS);
      if (prev > 0.0) CHECK(std::log10(prev / e) > 1.9);
      prev = e;
    }
  }
}

TEST_CASE("predict: no motion keeps the factors") {
  const TakagiPair p{CMatrix::Identity(2, 2), (RVector(2) << 2.0, 1.0).finished()};
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  const auto pr = predict(p, CSym(a));
  CHECK(pr.H.isZero());
  CHECK(pr.U == p.U);
  CHECK(pr.S == p.S);
}

TEST_CASE("predict: scalar e^{ih} gives H = i sin(h)/2 and S = cos h") {
  for (double h : {0.1, 0.01, 0.3}) {
    const auto pr = predict(identity_pair(1), scalar(std::polar(1.0, h)));
    CHECK_THAT(pr.H(0, 0).real(), WithinAbs(0.0, 1e-16));
    CHECK_THAT(pr.H(0, 0).imag(), WithinAbs(std::sin(h) / 2, 1e-15));
    CHECK_THAT(pr.S(0), WithinAbs(std::cos(h), 1e-15));
  }
}

TEST_CASE("predictor local error is second order") {
  const auto line = trig_line(6, 42);
  const auto p = takagi_svd(line.at(0.0));
  auto err = [&](double h) {
    const auto pr = predict(p, line.at(h));
    const auto exact = aligned(line.at(h), pr.U);
    return (exact.U - pr.U).norm();
  };
  const double ratio = err(1e-3) / err(5e-4);
  CHECK(ratio > 3.6);
  CHECK(ratio < 4.4);
}

TEST_CASE("sign alignment is idempotent and sign(0) = +1") {
  const CSym a = oracle::random_sym(5, 9);
  auto p = takagi_svd(a);
  CMatrix ref = p.U;
  ref.col(1) *= -1.0;
  ref.col(4) *= -1.0;
  auto z = sign_alignment(p.U, ref);
  CHECK(z == std::vector<int>{1, -1, 1, 1, -1});
  apply_signs(p.U, z);
  CHECK(sign_alignment(p.U, ref) == std::vector<int>(5, 1));

  CMatrix zero = CMatrix::Zero(2, 2);
  CHECK(sign_alignment(zero, zero) == std::vector<int>{1, 1});
}

TEST_CASE("pc_step: constant path is accepted with rho = 0 and h doubles") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  const CSym A(a);
  ContinuationControls c;
  ContinuationState s{0.0, takagi_svd(A), 0.01};
  const auto r = pc_step(s, [&](double) { return A; }, c);
  REQUIRE(r.outcome == StepOutcome::Accepted);
  CHECK(r.rho == 0.0);
  CHECK(r.state.t == 0.01);
  CHECK(r.state.h == 0.02);
}

TEST_CASE("pc_step on e^{it} follows U = e^{it/2}") {
  const PathFunction path = [](double t) { return scalar(std::polar(1.0, t)); };
  ContinuationControls c;
  ContinuationState s{0.0, identity_pair(1), c.hInit};
  while (s.t < 1.0) {
    auto r = pc_step(s, path, c);
    s = r.state;
    if (r.outcome == StepOutcome::Accepted)
      CHECK(std::abs(s.pair.U(0, 0) - std::polar(1.0, s.t / 2)) < 1e-13);
  }
  CHECK(s.t == 1.0);
}

TEST_CASE("accepted step size follows h tolstep / max(rho_sigma, rho_U), capped") {
  const auto line = trig_line(5, 3);
  const PathFunction path = [&](double t) { return line.at(t); };
  ContinuationControls c;
  ContinuationState s{0.0, takagi_svd(line.at(0.0)), 0.01};
  const auto r = pc_step(s, path, c);
  REQUIRE(r.outcome == StepOutcome::Accepted);
  const double law = std::min({0.01 * c.tolstep / std::max(r.rhoSigma, r.rhoU), 0.02, c.hMax});
  CHECK(r.state.h <= law * (1 + 1e-15));
}

TEST_CASE("continue_path: constant path completes with one row per step") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  const CSym A(a);
  const auto res = continue_path([&](double) { return A; }, takagi_svd(A));
  CHECK(res.status == PathStatus::Completed);
  CHECK(res.failed == 0);
  CHECK(res.trace.front().t == 0.0);
  CHECK(res.trace.back().t == 1.0);
  CHECK(res.trace.size() == static_cast<std::size_t>(res.accepted) + 1);
  for (std::size_t i = 1; i + 1 < res.trace.size(); ++i)
    CHECK(res.trace[i].h >= res.trace[i - 1].h);
}

TEST_CASE("continue_path: a full turn of e^{2 pi i t} flips the factor") {
  const PathFunction loop = [](double t) { return scalar(std::polar(1.0, 2 * pi * t)); };
  const auto res = continue_path(loop, identity_pair(1));
  REQUIRE(res.status == PathStatus::Completed);
  CHECK(std::abs(res.final.U(0, 0) + 1.0) < 1e-12);
}

TEST_CASE("continue_path: end factors agree with a direct factorization up to sign") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto line = trig_line(10, seed);
    const auto res = continue_path([&](double t) { return line.at(t); }, takagi_svd(line.at(0)));
    REQUIRE(res.status == PathStatus::Completed);
    const auto direct = takagi_svd(line.at(1.0));
    CHECK(oracle::sign_mismatch(res.final.U, direct.U) < 1e-12);
    CHECK(verify_takagi(line.at(1.0), res.final).residual < 1e-12);
  }
}

TEST_CASE("continuation is reversible up to sign-free equality") {
  const auto line = trig_line(6, 17);
  const PathFunction fwd = [&](double t) { return line.at(t); };
  const PathFunction back = [&](double t) { return line.at(1.0 - t); };
  const auto start = takagi_svd(line.at(0.0));
  const auto there = continue_path(fwd, start);
  const auto home = continue_path(back, there.final);
  REQUIRE(home.status == PathStatus::Completed);
  CHECK((home.final.U - start.U).norm() < 1e-10);
}

TEST_CASE("near-coalescent 2x2 path: step size dips near t = 1/2") {
  const double delta = 1e-3;
  const PathFunction path = [&](double t) {
    CMatrix a(2, 2);
    a << 1.0 + (t - 0.5), delta, delta, 1.0 - (t - 0.5);
    return CSym(a);
  };
  const auto res = continue_path(path, takagi_svd(path(0.0)));
  REQUIRE(res.status == PathStatus::Completed);
  const auto smallest = std::min_element(res.trace.begin() + 1, res.trace.end(),
                                         [](const auto& a, const auto& b) { return a.h < b.h; });
  CHECK(std::abs(smallest->t - 0.5) < 0.02);
  CHECK(smallest->h < 1e-2);
  CHECK(res.trace.back().h > 0.05);
  // the sigma gap at the closest approach is 2 delta
  double gap = 10.0;
  for (const auto& row : res.trace) gap = std::min(gap, row.S(0) - row.S(1));
  CHECK(gap >= 2 * delta - 1e-12);
}

TEST_CASE("continue_path halts at an exact crossing") {
  const PathFunction path = [](double t) {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 0.5 + t;
    a(1, 1) = 1.5 - t;
    return CSym(a);
  };
  const auto res = continue_path(path, takagi_svd(path(0.0)));
  CHECK(res.status == PathStatus::HaltedNearDegeneracy);
  CHECK(std::abs(res.haltT - 0.5) < 1e-3);
}

TEST_CASE("trace CSV has one column per singular value") {
  std::vector<TraceRow> rows{{0.0, RVector::Ones(2), 0.1, 0.0}};
  std::ostringstream os;
  write_trace_csv(os, rows);
  CHECK(os.str() == "t,sigma1,sigma2,h,rho\n0,1,1,0.10000000000000001,0\n");
}
