#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "takagi/matrix.hpp"
#include "takagi/monodromy.hpp"
#include "takagi/rng.hpp"

namespace takagi {

/// A draw from the ensemble G: A = B + B^T with Re B_ij, Im B_ij ~ N(0, 1/4),
/// giving diagonal entries of complex variance 2 and off-diagonal ones of 1.
struct EnsembleSample {
  Index n = 0;
  CSym A;
};

EnsembleSample sample_matrix(Index n, Stream& rng);

/// A(x, y) = A1 cos x + A2 sin x + A3 cos y + A4 sin y with A_k drawn from G.
class TrigField {
 public:
  TrigField(Index n, std::uint64_t seed, std::uint32_t realization,
            std::array<CSym, 4> coefficients);

  Index n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  std::uint32_t realization() const { return realization_; }
  const std::array<CSym, 4>& coefficients() const { return a_; }

  CSym eval(double x, double y) const;
  CSym ddx(double x, double y) const;
  CSym ddy(double x, double y) const;

  MatrixField as_field(const Rect& domain) const;

 private:
  Index n_;
  std::uint64_t seed_;
  std::uint32_t realization_;
  std::array<CSym, 4> a_;
};

/// Coefficient k of realization r is drawn from Stream(seed, r, 4n + k), so a
/// field is regenerated from {n, seed, realization} alone and fields of
/// different sizes never share a stream.
TrigField make_field(Index n, std::uint64_t seed, std::uint32_t realization = 0);

enum class ProbeMode { Transpose, Conjugate };

/// Empirical per-entry complex variances of U^T A U (or U^* A U) over
/// samples of G, with standard errors of each estimate.
struct VarianceTable {
  RMatrix variance;
  RMatrix stderror;
  long samples = 0;

  double diag_mean() const;
  double offdiag_mean() const;
};

VarianceTable variance_probe(Index n, long numSamples, const CMatrix& U, ProbeMode mode,
                             std::uint64_t seed);

/// Exact entry variances of U^* A U for A in G: 1 + |(U^T U)_ij|^2.
/// On the diagonal this equals 2 (1 - ||Im(u_i u_i^*)||_F^2).
RMatrix conjugate_mode_variance(const CMatrix& U);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// diagonal of R made positive.
CMatrix random_unitary(Index n, Stream& rng);

/// rho(sigma) = (sqrt 2 / pi) sqrt(n - sigma^2 / 8) on [0, sqrt(8n)].
double quarter_circle_pdf(double n, double sigma);

/// Normalized CDF of the quarter-circle law (mass below sigma divided by n).
double quarter_circle_cdf(double n, double sigma);

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges on [0, sqrt(8n)]
  std::vector<long> counts;
  std::vector<double> values;  // all sampled singular values, sorted
};

/// Which matrices the spectrum is sampled from. The quarter-circle law on
/// [0, sqrt(8n)] describes field values A(x, y), whose entry variances are
/// twice those of G; draws from G itself concentrate on [0, 2 sqrt(n)].
enum class SpectrumSource { FieldValue, Ensemble };

/// Sample s uses realization s of make_field(n, seed) evaluated at (0, 0),
/// or the G draw Stream(seed, s, 0x5157).
Histogram singular_spectrum_histogram(Index n, long numSamples, int bins, std::uint64_t seed,
                                      SpectrumSource source = SpectrumSource::FieldValue);

/// sup_sigma |F_empirical(sigma) - F_quarter(sigma)| for sorted values.
double quarter_circle_sup_distance(const std::vector<double>& sortedValues, double n);

/// s_0 > s_1 > ... > s_n with rho-mass k above s_k; bisection to 1e-12.
std::vector<double> quantile_levels(Index n);

}  // namespace takagi
