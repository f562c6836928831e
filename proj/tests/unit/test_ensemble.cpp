#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <catch_amalgamated.hpp>

#include "takagi/ensemble.hpp"

using namespace takagi;
using Catch::Matchers::WithinAbs;

namespace {

double rho(double n, double s) {
  return std::numbers::sqrt2 / std::numbers::pi * std::sqrt(std::max(n - s * s / 8, 0.0));
}

double mass_above(double n, double s) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [n](double x) { return rho(n, x); }, s, std::sqrt(8 * n), 15, 1e-14);
}

// Independent level: quadrature for the mass, TOMS 748 for the root.
double level_oracle(double n, double k) {
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(
      [&](double s) { return mass_above(n, s) - k; }, 0.0, std::sqrt(8 * n),
      boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

bool within(double value, double expect, double se, double k = 3.0) {
  return std::abs(value - expect) <= k * se;
}

}  // namespace

TEST_CASE("sample_matrix: 1x1 draws have variance 2") {
  double s2 = 0.0;
  const int N = 40000;
  for (int i = 0; i < N; ++i) {
    Stream rng(1, static_cast<std::uint32_t>(i), 0);
    s2 += std::norm(sample_matrix(1, rng).A(0, 0));
  }
  // |A|^2 for complex Gaussian of variance 2 has sd 2
  CHECK(within(s2 / N, 2.0, 2.0 / std::sqrt(double(N))));
}

TEST_CASE("sample_matrix is symmetric and reproducible") {
  Stream a(9, 3, 4), b(9, 3, 4);
  const auto x = sample_matrix(5, a).A.matrix();
  CHECK(x == sample_matrix(5, b).A.matrix());
  CHECK(x == x.transpose());
}

TEST_CASE("ensemble entries have variance 2 on and 1 off the diagonal") {
  const auto t = variance_probe(3, 100000, CMatrix::Identity(3, 3), ProbeMode::Transpose, 11);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(within(t.variance(i, j), i == j ? 2.0 : 1.0, t.stderror(i, j)));
}

TEST_CASE("transpose mode is invariant under a Haar unitary") {
  Stream rng(4, 0, 99);
  const CMatrix U = random_unitary(6, rng);
  CHECK((U.adjoint() * U - CMatrix::Identity(6, 6)).norm() < 1e-13);
  const auto t = variance_probe(6, 100000, U, ProbeMode::Transpose, 12);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j) CHECK(within(t.variance(i, j), i == j ? 2.0 : 1.0, t.stderror(i, j), 4.0));
}

TEST_CASE("conjugate mode: real orthogonal U keeps (2, 1)") {
  const double c = std::cos(0.7), s = std::sin(0.7);
  CMatrix q(2, 2);
  q << c, -s, s, c;
  const RMatrix exact = conjugate_mode_variance(q);
  CHECK_THAT(exact(0, 0), WithinAbs(2.0, 1e-15));
  CHECK_THAT(exact(0, 1), WithinAbs(1.0, 1e-15));
  const auto t = variance_probe(2, 50000, q, ProbeMode::Conjugate, 13);
  CHECK(within(t.variance(0, 0), 2.0, t.stderror(0, 0)));
}

TEST_CASE("conjugate mode variance formula matches Monte Carlo for complex U") {
  Stream rng(5, 0, 98);
  const CMatrix U = random_unitary(4, rng);
  const RMatrix exact = conjugate_mode_variance(U);
  const auto t = variance_probe(4, 100000, U, ProbeMode::Conjugate, 14);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) CHECK(within(t.variance(i, j), exact(i, j), t.stderror(i, j), 4.0));
  // diagonal identity 1 + |u_i^T u_i|^2 = 2 (1 - ||Im(u_i u_i^*)||_F^2)
  for (Index i = 0; i < 4; ++i) {
    const CMatrix outer = U.col(i) * U.col(i).adjoint();
    CHECK_THAT(exact(i, i), WithinAbs(2.0 * (1.0 - outer.imag().squaredNorm()), 1e-13));
  }
}

TEST_CASE("variance_probe rejects a non-unitary U") {
  CHECK_THROWS_AS(variance_probe(2, 10, CMatrix::Identity(2, 2) * 1.1, ProbeMode::Transpose, 1),
                  NotUnitary);
}

TEST_CASE("variance_probe is deterministic") {
  const auto a = variance_probe(3, 3000, CMatrix::Identity(3, 3), ProbeMode::Transpose, 2);
  const auto b = variance_probe(3, 3000, CMatrix::Identity(3, 3), ProbeMode::Transpose, 2);
  CHECK(a.variance == b.variance);
}

TEST_CASE("make_field: coefficients, periodicity, derivatives") {
  const auto f = make_field(4, 7, 2);
  const auto& a = f.coefficients();
  CHECK((f.eval(0, 0).matrix() - (a[0] + a[2]).matrix()).norm() == 0.0);
  const double tp = 2 * std::numbers::pi;
  CHECK((f.eval(0.3 + tp, 1.1).matrix() - f.eval(0.3, 1.1).matrix()).norm() < 1e-13);
  CHECK((f.eval(0.3, 1.1 + tp).matrix() - f.eval(0.3, 1.1).matrix()).norm() < 1e-13);
  const double h = 1e-5;
  const CMatrix fdx = (f.eval(0.3 + h, 1.1).matrix() - f.eval(0.3 - h, 1.1).matrix()) / (2 * h);
  const CMatrix fdy = (f.eval(0.3, 1.1 + h).matrix() - f.eval(0.3, 1.1 - h).matrix()) / (2 * h);
  CHECK((fdx - f.ddx(0.3, 1.1).matrix()).norm() < 1e-8);
  CHECK((fdy - f.ddy(0.3, 1.1).matrix()).norm() < 1e-8);
  CHECK(make_field(4, 7, 2).eval(1, 1).matrix() == f.eval(1, 1).matrix());
  CHECK(make_field(4, 7, 3).eval(1, 1).matrix() != f.eval(1, 1).matrix());
}

TEST_CASE("field values at a point have twice the ensemble variance") {
  // cos^2 x + sin^2 x + cos^2 y + sin^2 y = 2
  const int N = 40000;
  double d = 0.0, o = 0.0;
  for (int r = 0; r < N; ++r) {
    const auto a = make_field(2, 31, static_cast<std::uint32_t>(r)).eval(0.7, 1.3);
    d += std::norm(a(0, 0));
    o += std::norm(a(0, 1));
  }
  CHECK(within(d / N, 4.0, 4.0 / std::sqrt(double(N))));
  CHECK(within(o / N, 2.0, 2.0 / std::sqrt(double(N))));
}

TEST_CASE("quarter-circle density: support, endpoints, total mass") {
  CHECK_THAT(quarter_circle_pdf(4, std::sqrt(32.0)), WithinAbs(0.0, 1e-7));
  CHECK_THAT(quarter_circle_pdf(4, 0), WithinAbs(2 * std::numbers::sqrt2 / std::numbers::pi, 1e-15));
  CHECK_THROWS_AS(quarter_circle_pdf(4, 6.0), OutOfSupport);
  CHECK_THROWS_AS(quarter_circle_pdf(4, -0.1), OutOfSupport);
  for (double n : {1.0, 4.0, 50.0, 400.0}) {
    CHECK_THAT(mass_above(n, 0.0), WithinAbs(n, 1e-10 * n));
    for (double frac : {0.1, 0.5, 0.9})
      CHECK_THAT(quarter_circle_cdf(n, frac * std::sqrt(8 * n)),
                 WithinAbs(1.0 - mass_above(n, frac * std::sqrt(8 * n)) / n, 1e-12));
  }
}

TEST_CASE("quantile levels match an independent root-finder") {
  const auto s = quantile_levels(4);
  REQUIRE(s.size() == 5);
  CHECK(s[0] == std::sqrt(32.0));
  CHECK(s[4] == 0.0);
  CHECK_THAT(s[2], WithinAbs(level_oracle(4, 2), 1e-10));
  CHECK_THAT(s[2], WithinAbs(2.285214986181510878, 1e-10));
  CHECK_THAT(s[1], WithinAbs(3.590431379606563063, 1e-10));
  CHECK_THAT(s[3], WithinAbs(1.118043036295065512, 1e-10));
  const auto t = quantile_levels(9);
  for (std::size_t k = 1; k < t.size(); ++k) CHECK(t[k] < t[k - 1]);
}

TEST_CASE("field-value spectra follow the quarter circle; G itself is narrower by sqrt 2") {
  const auto h = singular_spectrum_histogram(60, 20, 12, 5);
  CHECK(h.values.size() == 1200u);
  long total = 0;
  for (long c : h.counts) total += c;
  CHECK(total == 1200);
  CHECK(quarter_circle_sup_distance(h.values, 60) < 0.03);

  const auto g = singular_spectrum_histogram(60, 20, 12, 5, SpectrumSource::Ensemble);
  CHECK(g.values.back() < 1.1 * 2 * std::sqrt(60.0));
  std::vector<double> scaled;
  for (double v : g.values) scaled.push_back(std::numbers::sqrt2 * v);
  CHECK(quarter_circle_sup_distance(scaled, 60) < 0.03);
  CHECK(quarter_circle_sup_distance(g.values, 60) > 0.15);
}

TEST_CASE("sup distance of the exact quantiles is at most 1/N") {
  std::vector<double> v;
  const double n = 10;
  for (int i = 0; i < 100; ++i) {
    const double target = (i + 0.5) / 100;
    std::uintmax_t it = 200;
    const auto r = boost::math::tools::toms748_solve(
        [&](double s) { return quarter_circle_cdf(n, s) - target; }, 0.0, std::sqrt(8 * n),
        boost::math::tools::eps_tolerance<double>(50), it);
    v.push_back(r.first);
  }
  CHECK(quarter_circle_sup_distance(v, n) <= 0.005 + 1e-9);
}
