#pragma once

#include <vector>

#include "takagi/matrix.hpp"

namespace takagi {

struct CountRow {
  Index n = 0;
  int realization = 0;
  long coalescenceCount = 0;
  long rankLossCount = 0;
  long inconclusiveCount = 0;
};

using CountSeries = std::vector<CountRow>;

struct CountPoint {
  double n;
  double count;
};

/// count = c n^q fitted by least squares on (log n, log count).
struct FitResult {
  double c = 0.0;
  double q = 0.0;
  double residual = 0.0;  // RMS of log residuals
  int pointCount = 0;
  int excludedZeros = 0;
};

/// Zero counts are dropped (and reported in excludedZeros). Throws
/// AllZeroCounts when nothing positive remains and InsufficientData when
/// fewer than two distinct n are left.
FitResult fit_power_law(const std::vector<CountPoint>& points);

struct Asymptotics {
  std::vector<double> perPair;  // rho(s_k)^p for k = 1 .. n-1
  double total = 0.0;
  double rankLossProxy = 0.0;  // rho(s_n)^p = rho(0)^p
};

/// Expected degeneracy counts (constant c = 1) when the density of
/// coalescences is rho(sigma)^p and coalescences sit at the quantile levels.
Asymptotics expected_count_asymptotics(Index n, double p);

struct SeriesSummary {
  double n;
  double mean;
  double stddev;
  int realizations;
};

/// Mean and sample standard deviation of `pick(row)` grouped by n.
std::vector<SeriesSummary> summarize(const CountSeries& series, long CountRow::*field);

}  // namespace takagi
