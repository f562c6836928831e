#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "takagi/continuation.hpp"

namespace takagi {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Rect {
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(Point p) const { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
};

/// A smooth map (x, y) -> complex symmetric n x n matrix over a rectangle.
struct MatrixField {
  std::function<CSym(double, double)> eval;
  Rect domain;
  Index n = 0;
};

/// Field translated so that the structure at p moves to p + (dx, dy).
MatrixField translate(const MatrixField& f, double dx, double dy);

/// Straight-segment path between two points, t in [0, 1].
PathFunction segment_path(const MatrixField& f, Point a, Point b);

/// Arclength-parametrized closed polyline through `vertices` (the last
/// vertex connects back to the first), t in [0, 1].
PathFunction polyline_path(const MatrixField& f, std::span<const Point> vertices,
                           bool closed = true);

/// Counter-clockwise boundary of `r` starting at its lower-left corner.
std::vector<Point> box_loop(const Rect& r);

/// Regular polygon approximating a circle, starting at angle 0.
std::vector<Point> circle_loop(Point center, double radius, int sides = 64);

enum class InconclusiveReason { None, NearDegeneracyOnBoundary, LowConfidence, DegenerateVertex };

std::string to_string(InconclusiveReason r);

inline constexpr double kDefaultConfidence = 0.9;

/// Column sign flips after transporting U once around a loop.
struct SignFlipVector {
  std::vector<int> z;
  RVector confidence;  // per-column |Re <u_k(0), u_k(1)>|
  InconclusiveReason reason = InconclusiveReason::None;

  bool trusted() const { return reason == InconclusiveReason::None; }
  double min_confidence() const { return confidence.size() ? confidence.minCoeff() : 0.0; }
};

/// Continues `initial` (a factorization at loop[0]) around the closed loop
/// and reads z_k = sign Re <u_k(0), u_k(1)>.
SignFlipVector loop_signature(const MatrixField& field, std::span<const Point> loop,
                              const TakagiPair& initial,
                              const ContinuationControls& controls = {},
                              double confidenceThreshold = kDefaultConfidence);

/// Unique mod-2 decomposition of a flip pattern into pair coalescences
/// (pair j flips columns j, j+1) and a rank loss (flips column n).
struct FlipDecoding {
  std::vector<int> pairs;  // 1-based pair indices
  bool rankLoss = false;
};

FlipDecoding decode_flips(const std::vector<int>& z);

enum class EventKind { None, Coalescence, RankLoss, Composite, Inconclusive };

std::string to_string(EventKind k);

struct EventClass {
  EventKind kind = EventKind::None;
  int pair = 0;  // 1-based, Coalescence only
  FlipDecoding decoded;
  InconclusiveReason reason = InconclusiveReason::None;
};

/// Maps a flip pattern to an event kind:
///   all +1                         -> None
///   exactly columns j, j+1 flipped -> Coalescence(j)
///   exactly column n flipped       -> RankLoss
///   anything else                  -> Composite (odd flip count implies a rank loss)
/// Untrusted signatures map to Inconclusive.
EventClass classify_flips(const SignFlipVector& s);

}  // namespace takagi
