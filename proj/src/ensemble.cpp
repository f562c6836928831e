#include "takagi/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "takagi/takagi_core.hpp"

namespace takagi {

EnsembleSample sample_matrix(Index n, Stream& rng) {
  CMatrix b(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double re = 0.5 * rng.normal();
      const double im = 0.5 * rng.normal();
      b(i, j) = Complex(re, im);
    }
  return {n, CSym(CMatrix(b + b.transpose()))};
}

TrigField::TrigField(Index n, std::uint64_t seed, std::uint32_t realization,
                     std::array<CSym, 4> coefficients)
    : n_(n), seed_(seed), realization_(realization), a_(std::move(coefficients)) {}

CSym TrigField::eval(double x, double y) const {
  return a_[0] * std::cos(x) + a_[1] * std::sin(x) + a_[2] * std::cos(y) + a_[3] * std::sin(y);
}

CSym TrigField::ddx(double x, double /*y*/) const {
  return a_[1] * std::cos(x) - a_[0] * std::sin(x);
}

CSym TrigField::ddy(double /*x*/, double y) const {
  return a_[3] * std::cos(y) - a_[2] * std::sin(y);
}

MatrixField TrigField::as_field(const Rect& domain) const {
  return {[f = *this](double x, double y) { return f.eval(x, y); }, domain, n_};
}

TrigField make_field(Index n, std::uint64_t seed, std::uint32_t realization) {
  auto draw = [&](std::uint32_t k) {
    Stream s(seed, realization, (static_cast<std::uint32_t>(n) << 2) | k);
    return sample_matrix(n, s).A;
  };
  return TrigField(n, seed, realization, {draw(0), draw(1), draw(2), draw(3)});
}

double VarianceTable::diag_mean() const { return variance.diagonal().mean(); }

double VarianceTable::offdiag_mean() const {
  const Index n = variance.rows();
  if (n < 2) return 0.0;
  return (variance.sum() - variance.diagonal().sum()) / static_cast<double>(n * (n - 1));
}

CMatrix random_unitary(Index n, Stream& rng) {
  CMatrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    q.col(k) *= d / std::abs(d);
  }
  return q;
}

VarianceTable variance_probe(Index n, long numSamples, const CMatrix& U, ProbeMode mode,
                             std::uint64_t seed) {
  if (U.rows() != n || U.cols() != n) throw DimensionMismatch("U must be n x n");
  const double defect = (U.adjoint() * U - CMatrix::Identity(n, n)).norm();
  if (defect > 1e-12) throw NotUnitary(defect);

  const CMatrix left = mode == ProbeMode::Transpose ? CMatrix(U.transpose()) : CMatrix(U.adjoint());

  // Fixed-size blocks reduced in order keep the sums independent of the
  // thread count.
  constexpr long kBlock = 1024;
  const long blocks = (numSamples + kBlock - 1) / kBlock;
  std::vector<CMatrix> sum(static_cast<std::size_t>(blocks), CMatrix::Zero(n, n));
  std::vector<RMatrix> sum2(static_cast<std::size_t>(blocks), RMatrix::Zero(n, n));
  std::vector<RMatrix> sum4(static_cast<std::size_t>(blocks), RMatrix::Zero(n, n));

#pragma omp parallel for schedule(dynamic)
  for (long b = 0; b < blocks; ++b) {
    const auto bi = static_cast<std::size_t>(b);
    const long end = std::min(numSamples, (b + 1) * kBlock);
    for (long s = b * kBlock; s < end; ++s) {
      Stream rng(seed, static_cast<std::uint32_t>(s), 0x7a7au);
      const CMatrix m = left * sample_matrix(n, rng).A.matrix() * U;
      const RMatrix a2 = m.cwiseAbs2();
      sum[bi] += m;
      sum2[bi] += a2;
      sum4[bi] += a2.cwiseProduct(a2);
    }
  }

  CMatrix s1 = CMatrix::Zero(n, n);
  RMatrix s2 = RMatrix::Zero(n, n), s4 = RMatrix::Zero(n, n);
  for (std::size_t b = 0; b < sum.size(); ++b) {
    s1 += sum[b];
    s2 += sum2[b];
    s4 += sum4[b];
  }
  const double N = static_cast<double>(numSamples);
  VarianceTable t;
  t.samples = numSamples;
  t.variance.resize(n, n);
  t.stderror.resize(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double m2 = s2(i, j) / N;
      const double mean2 = std::norm(s1(i, j) / N);
      t.variance(i, j) = (s2(i, j) - N * mean2) / (N - 1.0);
      t.stderror(i, j) = std::sqrt(std::max(s4(i, j) / N - m2 * m2, 0.0) / N);
    }
  return t;
}

RMatrix conjugate_mode_variance(const CMatrix& U) {
  const CMatrix utu = U.transpose() * U;
  return (utu.cwiseAbs2().array() + 1.0).matrix();
}

double quarter_circle_pdf(double n, double sigma) {
  const double top = std::sqrt(8.0 * n);
  if (sigma < 0.0 || sigma > top * (1.0 + 1e-15)) throw OutOfSupport("sigma outside [0, sqrt(8n)]");
  return std::numbers::sqrt2 / std::numbers::pi * std::sqrt(std::max(n - sigma * sigma / 8.0, 0.0));
}

double quarter_circle_cdf(double n, double sigma) {
  const double top = std::sqrt(8.0 * n);
  if (sigma <= 0.0) return 0.0;
  if (sigma >= top) return 1.0;
  const double th = std::asin(sigma / top);
  return 2.0 / std::numbers::pi * (th + std::sin(th) * std::cos(th));
}

Histogram singular_spectrum_histogram(Index n, long numSamples, int bins, std::uint64_t seed,
                                      SpectrumSource source) {
  std::vector<std::vector<double>> per(static_cast<std::size_t>(numSamples));
#pragma omp parallel for schedule(dynamic)
  for (long s = 0; s < numSamples; ++s) {
    CSym a;
    if (source == SpectrumSource::FieldValue) {
      a = make_field(n, seed, static_cast<std::uint32_t>(s)).eval(0.0, 0.0);
    } else {
      Stream rng(seed, static_cast<std::uint32_t>(s), 0x5157u);
      a = sample_matrix(n, rng).A;
    }
    const RVector sv = singular_values(a.matrix());
    per[static_cast<std::size_t>(s)].assign(sv.data(), sv.data() + sv.size());
  }
  Histogram h;
  for (const auto& v : per) h.values.insert(h.values.end(), v.begin(), v.end());
  std::sort(h.values.begin(), h.values.end());

  const double top = std::sqrt(8.0 * static_cast<double>(n));
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = top * b / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : h.values) {
    const int b = std::clamp(static_cast<int>(v / top * bins), 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

double quarter_circle_sup_distance(const std::vector<double>& sorted, double n) {
  const double N = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = quarter_circle_cdf(n, sorted[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / N),
                  std::abs(static_cast<double>(i + 1) / N - f)});
  }
  return d;
}

std::vector<double> quantile_levels(Index n) {
  const double nn = static_cast<double>(n);
  const double top = std::sqrt(8.0 * nn);
  std::vector<double> s(static_cast<std::size_t>(n) + 1);
  s.front() = top;
  s.back() = 0.0;
  for (Index k = 1; k < n; ++k) {
    // mass above sigma is n (1 - F(sigma)), decreasing in sigma
    const double target = static_cast<double>(k);
    double lo = 0.0, hi = top;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (nn * (1.0 - quarter_circle_cdf(nn, mid)) > target)
        lo = mid;
      else
        hi = mid;
    }
    s[static_cast<std::size_t>(k)] = 0.5 * (lo + hi);
  }
  return s;
}

}  // namespace takagi
