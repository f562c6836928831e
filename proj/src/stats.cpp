#include "takagi/stats.hpp"

#include <cmath>
#include <map>
#include <set>

#include "takagi/ensemble.hpp"

namespace takagi {

FitResult fit_power_law(const std::vector<CountPoint>& points) {
  FitResult r;
  std::vector<double> lx, ly;
  std::set<double> distinct;
  for (const auto& p : points) {
    if (p.count <= 0.0) {
      ++r.excludedZeros;
      continue;
    }
    lx.push_back(std::log(p.n));
    ly.push_back(std::log(p.count));
    distinct.insert(p.n);
  }
  if (!points.empty() && lx.empty()) throw AllZeroCounts("all counts are zero");
  if (distinct.size() < 2) throw InsufficientData("need at least two distinct dimensions");

  const double m = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  r.q = sxy / sxx;
  const double intercept = my - r.q * mx;
  r.c = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (intercept + r.q * lx[i]);
    ss += e * e;
  }
  r.residual = std::sqrt(ss / m);
  r.pointCount = static_cast<int>(lx.size());
  return r;
}

Asymptotics expected_count_asymptotics(Index n, double p) {
  const auto s = quantile_levels(n);
  const double nn = static_cast<double>(n);
  Asymptotics a;
  for (Index k = 1; k < n; ++k) {
    const double v = std::pow(quarter_circle_pdf(nn, s[static_cast<std::size_t>(k)]), p);
    a.perPair.push_back(v);
    a.total += v;
  }
  a.rankLossProxy = std::pow(quarter_circle_pdf(nn, 0.0), p);
  return a;
}

std::vector<SeriesSummary> summarize(const CountSeries& series, long CountRow::*field) {
  std::map<Index, std::vector<double>> groups;
  for (const auto& row : series) groups[row.n].push_back(static_cast<double>(row.*field));
  std::vector<SeriesSummary> out;
  for (const auto& [n, v] : groups) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    out.push_back({static_cast<double>(n), mean, sd, static_cast<int>(v.size())});
  }
  return out;
}

}  // namespace takagi
