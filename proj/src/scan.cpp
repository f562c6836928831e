#include "takagi/scan.hpp"

#include <cmath>

namespace takagi {

std::optional<std::pair<int, int>> Grid::locate(Point p) const {
  if (!domain.contains(p)) return std::nullopt;
  const int i = std::min(m - 1, static_cast<int>(std::floor((p.x - domain.x0) / box_width())));
  const int j = std::min(k - 1, static_cast<int>(std::floor((p.y - domain.y0) / box_height())));
  return std::make_pair(i, j);
}

long ScanCounts::coalescence_total() const {
  long t = 0;
  for (long c : coalescencePerPair) t += c;
  return t;
}

void ScanCounts::add(const BoxEvent& e) {
  auto bump_pair = [&](int pair) {
    const auto idx = static_cast<std::size_t>(pair - 1);
    if (idx < coalescencePerPair.size()) ++coalescencePerPair[idx];
  };
  switch (e.cls.kind) {
    case EventKind::None: break;
    case EventKind::Coalescence: bump_pair(e.cls.pair); break;
    case EventKind::RankLoss: ++rankLoss; break;
    case EventKind::Composite:
      ++composite;
      for (int p : e.cls.decoded.pairs) bump_pair(p);
      if (e.cls.decoded.rankLoss) ++rankLoss;
      break;
    case EventKind::Inconclusive: ++inconclusive; break;
  }
}

VertexFactor resolve_vertex(const MatrixField& field, Point p, Point offset,
                            const ContinuationControls& controls) {
  try {
    return {p, takagi(field.eval(p.x, p.y), controls.backend, controls.tolDistinct)};
  } catch (const DegenerateInput&) {
  }
  const Point q{p.x - offset.x, p.y - offset.y};
  try {
    return {q, takagi(field.eval(q.x, q.y), controls.backend, controls.tolDistinct)};
  } catch (const DegenerateInput&) {
    return {q, std::nullopt};
  }
}

EdgeTransport transport_edge(const MatrixField& field, const VertexFactor& a,
                             const VertexFactor& b, Point detour, const ScanOptions& options) {
  EdgeTransport e;
  const Index n = field.n;
  if (!a.pair || !b.pair) {
    e.d.assign(static_cast<std::size_t>(n), 1);
    e.confidence = RVector::Zero(n);
    e.reason = InconclusiveReason::DegenerateVertex;
    return e;
  }
  PathResult res = continue_path(segment_path(field, a.p, b.p), *a.pair, options.controls);
  if (res.status == PathStatus::HaltedNearDegeneracy) {
    const Point pts[] = {a.p,
                         {a.p.x - detour.x, a.p.y - detour.y},
                         {b.p.x - detour.x, b.p.y - detour.y},
                         b.p};
    res = continue_path(polyline_path(field, pts, false), *a.pair, options.controls);
  }
  if (res.status == PathStatus::HaltedNearDegeneracy) {
    e.d.assign(static_cast<std::size_t>(n), 1);
    e.confidence = RVector::Zero(n);
    e.reason = InconclusiveReason::NearDegeneracyOnBoundary;
    return e;
  }
  RVector overlap;
  e.d = sign_alignment(b.pair->U, res.final.U, &overlap);
  e.confidence = overlap.cwiseAbs();
  if (e.confidence.minCoeff() < options.confidence) e.reason = InconclusiveReason::LowConfidence;
  return e;
}

SignFlipVector combine_edges(std::initializer_list<const EdgeTransport*> edges, Index n,
                             double confidenceThreshold) {
  SignFlipVector s;
  s.z.assign(static_cast<std::size_t>(n), 1);
  s.confidence = RVector::Ones(n);
  for (const EdgeTransport* e : edges) {
    for (std::size_t c = 0; c < s.z.size(); ++c) s.z[c] *= e->d[c];
    s.confidence = s.confidence.cwiseMin(e->confidence);
    if (s.reason == InconclusiveReason::None) s.reason = e->reason;
  }
  if (s.reason == InconclusiveReason::None && s.confidence.minCoeff() < confidenceThreshold)
    s.reason = InconclusiveReason::LowConfidence;
  return s;
}

namespace {

Point vertex_offset(const Grid& g, double nudge) {
  return {nudge * g.box_width(), nudge * g.box_height()};
}

std::vector<VertexFactor> vertex_row(const MatrixField& field, const Grid& g, int j,
                                     const ScanOptions& o, bool parallel) {
  std::vector<VertexFactor> row(static_cast<std::size_t>(g.m) + 1);
  const Point off = vertex_offset(g, o.nudge);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i <= g.m; ++i)
    row[static_cast<std::size_t>(i)] = resolve_vertex(field, {g.x(i), g.y(j)}, off, o.controls);
  return row;
}

std::vector<EdgeTransport> horizontal_edges(const MatrixField& field, const Grid& g,
                                            const std::vector<VertexFactor>& verts,
                                            const ScanOptions& o, bool parallel) {
  std::vector<EdgeTransport> edges(static_cast<std::size_t>(g.m));
  const Point detour{0.0, o.nudge * g.box_height()};
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < g.m; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    edges[ui] = transport_edge(field, verts[ui], verts[ui + 1], detour, o);
  }
  return edges;
}

std::vector<EdgeTransport> vertical_edges(const MatrixField& field, const Grid& g,
                                          const std::vector<VertexFactor>& low,
                                          const std::vector<VertexFactor>& high,
                                          const ScanOptions& o, bool parallel) {
  std::vector<EdgeTransport> edges(static_cast<std::size_t>(g.m) + 1);
  const Point detour{o.nudge * g.box_width(), 0.0};
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i <= g.m; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    edges[ui] = transport_edge(field, low[ui], high[ui], detour, o);
  }
  return edges;
}

// Signatures of the boxes of row j given the three edge sets around it.
std::vector<SignFlipVector> row_signatures(const std::vector<EdgeTransport>& bottom,
                                           const std::vector<EdgeTransport>& top,
                                           const std::vector<EdgeTransport>& sides, Index n,
                                           double conf) {
  std::vector<SignFlipVector> out;
  out.reserve(bottom.size());
  for (std::size_t i = 0; i < bottom.size(); ++i)
    out.push_back(combine_edges({&bottom[i], &sides[i + 1], &top[i], &sides[i]}, n, conf));
  return out;
}

// Edge-cached signatures of all boxes of a small grid, row-major.
std::vector<SignFlipVector> cached_signatures(const MatrixField& field, const Grid& g,
                                              const ScanOptions& o) {
  std::vector<SignFlipVector> out;
  auto low = vertex_row(field, g, 0, o, false);
  auto bottom = horizontal_edges(field, g, low, o, false);
  for (int j = 0; j < g.k; ++j) {
    auto high = vertex_row(field, g, j + 1, o, false);
    auto top = horizontal_edges(field, g, high, o, false);
    const auto sides = vertical_edges(field, g, low, high, o, false);
    for (auto& s : row_signatures(bottom, top, sides, field.n, o.confidence)) out.push_back(std::move(s));
    low = std::move(high);
    bottom = std::move(top);
  }
  return out;
}

SignFlipVector serial_box_signature(const MatrixField& field, const Rect& r, const ScanOptions& o) {
  const Point off{o.nudge * r.width(), o.nudge * r.height()};
  const auto corners = box_loop(r);
  std::vector<VertexFactor> v;
  for (const auto& c : corners) v.push_back(resolve_vertex(field, c, off, o.controls));
  for (const auto& f : v) {
    if (!f.pair) {
      SignFlipVector s;
      s.z.assign(static_cast<std::size_t>(field.n), 1);
      s.confidence = RVector::Zero(field.n);
      s.reason = InconclusiveReason::DegenerateVertex;
      return s;
    }
  }
  const std::vector<Point> loop{v[0].p, v[1].p, v[2].p, v[3].p};
  SignFlipVector s = loop_signature(field, loop, *v[0].pair, o.controls, o.confidence);
  if (s.reason != InconclusiveReason::NearDegeneracyOnBoundary) return s;

  // Every edge detoured by -offset along its normal, matching the
  // parallel scanner's edge detours.
  auto shift = [](Point p, double dx, double dy) { return Point{p.x - dx, p.y - dy}; };
  const Point ll = v[0].p, lr = v[1].p, ur = v[2].p, ul = v[3].p;
  const std::vector<Point> detoured{
      ll, shift(ll, 0, off.y), shift(lr, 0, off.y), lr, shift(lr, off.x, 0), shift(ur, off.x, 0),
      ur, shift(ur, 0, off.y), shift(ul, 0, off.y), ul, shift(ul, off.x, 0), shift(ll, off.x, 0)};
  return loop_signature(field, detoured, *v[0].pair, o.controls, o.confidence);
}

using ChildSignatures = std::function<std::vector<SignFlipVector>(const Rect&)>;

void resolve_box(int i, int j, const Rect& r, const SignFlipVector& sig, int depth,
                 const ScanOptions& o, const ChildSignatures& children,
                 std::vector<BoxEvent>& out) {
  const EventClass cls = classify_flips(sig);
  const bool ambiguous = cls.kind == EventKind::Composite || cls.kind == EventKind::Inconclusive;
  if (ambiguous && depth < o.refineDepth) {
    const Grid sub{r, 2, 2};
    const auto sigs = children(r);
    for (int cj = 0; cj < 2; ++cj)
      for (int ci = 0; ci < 2; ++ci)
        resolve_box(i, j, sub.box(ci, cj), sigs[static_cast<std::size_t>(cj * 2 + ci)], depth + 1,
                    o, children, out);
    return;
  }
  if (cls.kind == EventKind::None) return;
  out.push_back({i, j, r, depth, cls, sig.z, sig.min_confidence()});
}

}  // namespace

ScanReport grid_scan(const MatrixField& field, const Grid& grid, const ScanOptions& options,
                     const ScanProgress& progress) {
  ScanReport rep;
  rep.grid = grid;
  rep.n = field.n;
  rep.options = options;
  rep.counts = progress.priorCounts.value_or(ScanCounts(field.n));
  rep.events = progress.priorEvents;
  rep.rowsCompleted = progress.firstRow;

  const int stop = progress.stopRow < 0 ? grid.k : std::min(progress.stopRow, grid.k);
  if (progress.firstRow >= stop) return rep;

  const ChildSignatures children = [&](const Rect& r) {
    return cached_signatures(field, Grid{r, 2, 2}, options);
  };

  auto low = vertex_row(field, grid, progress.firstRow, options, true);
  auto bottom = horizontal_edges(field, grid, low, options, true);
  for (int j = progress.firstRow; j < stop; ++j) {
    auto high = vertex_row(field, grid, j + 1, options, true);
    auto top = horizontal_edges(field, grid, high, options, true);
    const auto sides = vertical_edges(field, grid, low, high, options, true);
    const auto sigs = row_signatures(bottom, top, sides, field.n, options.confidence);

    std::vector<std::vector<BoxEvent>> perBox(static_cast<std::size_t>(grid.m));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < grid.m; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      resolve_box(i, j, grid.box(i, j), sigs[ui], 0, options, children, perBox[ui]);
    }
    std::vector<BoxEvent> rowEvents;
    for (auto& v : perBox)
      for (auto& e : v) {
        rep.counts.add(e);
        rowEvents.push_back(std::move(e));
      }
    rep.events.insert(rep.events.end(), rowEvents.begin(), rowEvents.end());
    rep.rowsCompleted = j + 1;
    if (progress.onRowDone) progress.onRowDone(j, rowEvents, rep.counts);
    low = std::move(high);
    bottom = std::move(top);
  }
  return rep;
}

ScanReport grid_scan_serial(const MatrixField& field, const Grid& grid, const ScanOptions& options) {
  ScanReport rep;
  rep.grid = grid;
  rep.n = field.n;
  rep.options = options;
  rep.counts = ScanCounts(field.n);

  const ChildSignatures children = [&](const Rect& r) {
    const Grid sub{r, 2, 2};
    std::vector<SignFlipVector> out;
    for (int cj = 0; cj < 2; ++cj)
      for (int ci = 0; ci < 2; ++ci) out.push_back(serial_box_signature(field, sub.box(ci, cj), options));
    return out;
  };

  for (int j = 0; j < grid.k; ++j) {
    for (int i = 0; i < grid.m; ++i) {
      const Rect r = grid.box(i, j);
      std::vector<BoxEvent> evs;
      resolve_box(i, j, r, serial_box_signature(field, r, options), 0, options, children, evs);
      for (auto& e : evs) {
        rep.counts.add(e);
        rep.events.push_back(std::move(e));
      }
    }
    rep.rowsCompleted = j + 1;
  }
  return rep;
}

}  // namespace takagi
