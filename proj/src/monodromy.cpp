#include "takagi/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace takagi {

MatrixField translate(const MatrixField& f, double dx, double dy) {
  MatrixField g = f;
  g.eval = [inner = f.eval, dx, dy](double x, double y) { return inner(x - dx, y - dy); };
  return g;
}

PathFunction segment_path(const MatrixField& f, Point a, Point b) {
  return [eval = f.eval, a, b](double t) {
    return eval(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
  };
}

PathFunction polyline_path(const MatrixField& f, std::span<const Point> vertices, bool closed) {
  std::vector<Point> pts(vertices.begin(), vertices.end());
  if (closed) pts.push_back(vertices.front());
  std::vector<double> cum(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i)
    cum[i] = cum[i - 1] + std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
  return [eval = f.eval, pts = std::move(pts), cum = std::move(cum)](double t) {
    if (t <= 0.0) return eval(pts.front().x, pts.front().y);
    if (t >= 1.0) return eval(pts.back().x, pts.back().y);
    const double s = t * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), s);
    const auto i = static_cast<std::size_t>(std::distance(cum.begin(), it)) - 1;
    const double len = cum[i + 1] - cum[i];
    const double u = len > 0.0 ? (s - cum[i]) / len : 0.0;
    return eval(pts[i].x + u * (pts[i + 1].x - pts[i].x), pts[i].y + u * (pts[i + 1].y - pts[i].y));
  };
}

std::vector<Point> box_loop(const Rect& r) {
  return {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
}

std::vector<Point> circle_loop(Point center, double radius, int sides) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(sides));
  for (int i = 0; i < sides; ++i) {
    const double th = 2.0 * std::numbers::pi * i / sides;
    pts.push_back({center.x + radius * std::cos(th), center.y + radius * std::sin(th)});
  }
  return pts;
}

std::string to_string(InconclusiveReason r) {
  switch (r) {
    case InconclusiveReason::None: return "none";
    case InconclusiveReason::NearDegeneracyOnBoundary: return "near_degeneracy_on_boundary";
    case InconclusiveReason::LowConfidence: return "low_confidence";
    case InconclusiveReason::DegenerateVertex: return "degenerate_vertex";
  }
  return "unknown";
}

SignFlipVector loop_signature(const MatrixField& field, std::span<const Point> loop,
                              const TakagiPair& initial, const ContinuationControls& controls,
                              double confidenceThreshold) {
  const auto path = polyline_path(field, loop, true);
  const PathResult res = continue_path(path, initial, controls);
  SignFlipVector s;
  if (res.status == PathStatus::HaltedNearDegeneracy) {
    s.z.assign(static_cast<std::size_t>(initial.n()), 1);
    s.confidence = RVector::Zero(initial.n());
    s.reason = InconclusiveReason::NearDegeneracyOnBoundary;
    return s;
  }
  RVector overlap;
  s.z = sign_alignment(res.final.U, initial.U, &overlap);
  s.confidence = overlap.cwiseAbs();
  if (s.confidence.minCoeff() < confidenceThreshold) s.reason = InconclusiveReason::LowConfidence;
  return s;
}

FlipDecoding decode_flips(const std::vector<int>& z) {
  FlipDecoding d;
  int carry = 0;
  const std::size_t n = z.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    carry ^= z[k] < 0 ? 1 : 0;
    if (carry) d.pairs.push_back(static_cast<int>(k + 1));
  }
  if (n > 0) d.rankLoss = ((z[n - 1] < 0 ? 1 : 0) ^ carry) != 0;
  return d;
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::None: return "none";
    case EventKind::Coalescence: return "coalescence";
    case EventKind::RankLoss: return "rank_loss";
    case EventKind::Composite: return "composite";
    case EventKind::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

EventClass classify_flips(const SignFlipVector& s) {
  EventClass e;
  if (!s.trusted()) {
    e.kind = EventKind::Inconclusive;
    e.reason = s.reason;
    return e;
  }
  std::vector<std::size_t> flipped;
  for (std::size_t k = 0; k < s.z.size(); ++k)
    if (s.z[k] < 0) flipped.push_back(k);
  e.decoded = decode_flips(s.z);
  const std::size_t n = s.z.size();
  if (flipped.empty()) {
    e.kind = EventKind::None;
  } else if (flipped.size() == 1 && flipped[0] == n - 1) {
    e.kind = EventKind::RankLoss;
  } else if (flipped.size() == 2 && flipped[1] == flipped[0] + 1) {
    e.kind = EventKind::Coalescence;
    e.pair = static_cast<int>(flipped[0] + 1);
  } else {
    e.kind = EventKind::Composite;
  }
  return e;
}

}  // namespace takagi
