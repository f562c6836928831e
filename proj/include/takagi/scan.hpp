#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "takagi/monodromy.hpp"

namespace takagi {

/// Uniform m x k partition of a rectangle; box (i, j) is the half-open
/// cell [x_i, x_{i+1}) x [y_j, y_{j+1}).
struct Grid {
  Rect domain;
  int m = 1;  // boxes along x
  int k = 1;  // boxes along y

  double box_width() const { return domain.width() / m; }
  double box_height() const { return domain.height() / k; }
  double x(int i) const { return i == m ? domain.x1 : domain.x0 + i * box_width(); }
  double y(int j) const { return j == k ? domain.y1 : domain.y0 + j * box_height(); }
  Rect box(int i, int j) const { return {x(i), x(i + 1), y(j), y(j + 1)}; }
  /// Box containing p, or nullopt outside the domain.
  std::optional<std::pair<int, int>> locate(Point p) const;
};

struct ScanOptions {
  ContinuationControls controls;
  double confidence = kDefaultConfidence;
  int refineDepth = 1;
  /// Displacement, as a fraction of the box size, applied to a vertex whose
  /// own factorization is degenerate and to edge detours when continuation
  /// stalls on an edge. Resolves degeneracies lying exactly on the grid.
  double nudge = 1e-3;
};

/// A box (or refined sub-box) whose final classification is not None.
struct BoxEvent {
  int i = 0, j = 0;  // top-level grid box
  Rect rect;         // the (sub-)box the classification belongs to
  int depth = 0;
  EventClass cls;
  std::vector<int> z;
  double confidence = 0.0;
};

struct ScanCounts {
  std::vector<long> coalescencePerPair;  // index j-1 for pair (j, j+1)
  long rankLoss = 0;
  long composite = 0;
  long inconclusive = 0;

  explicit ScanCounts(Index n = 1) : coalescencePerPair(static_cast<std::size_t>(n > 1 ? n - 1 : 0), 0) {}
  long coalescence_total() const;
  /// Coalescence and RankLoss count once; Composite counts its decoded
  /// pattern; Inconclusive is tallied separately and never as an event.
  void add(const BoxEvent& e);
  bool operator==(const ScanCounts&) const = default;
};

struct ScanReport {
  Grid grid;
  Index n = 0;
  ScanOptions options;
  ScanCounts counts;
  std::vector<BoxEvent> events;  // row-major box order, then sub-box order
  int rowsCompleted = 0;
};

/// Resume state and per-row hook. Rows [firstRow, stopRow) are scanned;
/// prior events/counts from earlier rows are carried into the report.
struct ScanProgress {
  int firstRow = 0;
  int stopRow = -1;  // -1: to the last row
  std::vector<BoxEvent> priorEvents;
  std::optional<ScanCounts> priorCounts;
  std::function<void(int row, const std::vector<BoxEvent>& rowEvents, const ScanCounts& running)>
      onRowDone;
};

/// Parallel scanner. Each grid edge is continued once, from the canonical
/// factorization at its start vertex; a box signature is the product of
/// the sign vectors of its four edges. Rows are processed in order;
/// vertices, edges, and refinements within a row run under OpenMP.
ScanReport grid_scan(const MatrixField& field, const Grid& grid, const ScanOptions& options = {},
                     const ScanProgress& progress = {});

/// Reference scanner: one loop_signature per box around its own boundary,
/// no sharing, single-threaded.
ScanReport grid_scan_serial(const MatrixField& field, const Grid& grid,
                            const ScanOptions& options = {});

// Building blocks, exposed for tests and the benchmark.

struct VertexFactor {
  Point p;
  std::optional<TakagiPair> pair;
};

/// Factorizes at p; if degenerate there, retries at p - offset.
VertexFactor resolve_vertex(const MatrixField& field, Point p, Point offset,
                            const ContinuationControls& controls);

struct EdgeTransport {
  std::vector<int> d;  // transport of start factor = end factor * diag(d)
  RVector confidence;
  InconclusiveReason reason = InconclusiveReason::None;
};

/// Continues the start vertex factor to the end vertex along a straight
/// segment; if that stalls, along a detour shifted by -detour.
EdgeTransport transport_edge(const MatrixField& field, const VertexFactor& a,
                             const VertexFactor& b, Point detour, const ScanOptions& options);

/// Signature of a loop assembled from edge transports (each traversed
/// forward or backward; sign vectors are their own inverses).
SignFlipVector combine_edges(std::initializer_list<const EdgeTransport*> edges, Index n,
                             double confidenceThreshold);

}  // namespace takagi
