#include "takagi/report.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace takagi {

using nlohmann::json;

namespace {

EventKind kind_from_string(const std::string& s) {
  if (s == "coalescence") return EventKind::Coalescence;
  if (s == "rank_loss") return EventKind::RankLoss;
  if (s == "composite") return EventKind::Composite;
  if (s == "inconclusive") return EventKind::Inconclusive;
  return EventKind::None;
}

InconclusiveReason reason_from_string(const std::string& s) {
  if (s == "near_degeneracy_on_boundary") return InconclusiveReason::NearDegeneracyOnBoundary;
  if (s == "low_confidence") return InconclusiveReason::LowConfidence;
  if (s == "degenerate_vertex") return InconclusiveReason::DegenerateVertex;
  return InconclusiveReason::None;
}

}  // namespace

json to_json(const ScanCounts& c) {
  return {{"coalescence_per_pair", c.coalescencePerPair},
          {"coalescence_total", c.coalescence_total()},
          {"rank_loss", c.rankLoss},
          {"composite", c.composite},
          {"inconclusive", c.inconclusive}};
}

ScanCounts counts_from_json(const json& j) {
  ScanCounts c;
  c.coalescencePerPair = j.at("coalescence_per_pair").get<std::vector<long>>();
  c.rankLoss = j.at("rank_loss").get<long>();
  c.composite = j.at("composite").get<long>();
  c.inconclusive = j.at("inconclusive").get<long>();
  return c;
}

json to_json(const BoxEvent& e) {
  json j{{"i", e.i},
         {"j", e.j},
         {"depth", e.depth},
         {"rect", {e.rect.x0, e.rect.x1, e.rect.y0, e.rect.y1}},
         {"kind", to_string(e.cls.kind)},
         {"z", e.z},
         {"confidence", e.confidence}};
  if (e.cls.kind == EventKind::Coalescence) j["pair"] = e.cls.pair;
  if (e.cls.kind == EventKind::Composite)
    j["decoded"] = {{"pairs", e.cls.decoded.pairs}, {"rank_loss", e.cls.decoded.rankLoss}};
  if (e.cls.kind == EventKind::Inconclusive) j["reason"] = to_string(e.cls.reason);
  return j;
}

BoxEvent event_from_json(const json& j) {
  BoxEvent e;
  e.i = j.at("i").get<int>();
  e.j = j.at("j").get<int>();
  e.depth = j.at("depth").get<int>();
  const auto r = j.at("rect").get<std::vector<double>>();
  e.rect = {r.at(0), r.at(1), r.at(2), r.at(3)};
  e.cls.kind = kind_from_string(j.at("kind").get<std::string>());
  e.z = j.at("z").get<std::vector<int>>();
  e.confidence = j.at("confidence").get<double>();
  if (j.contains("pair")) e.cls.pair = j["pair"].get<int>();
  if (j.contains("decoded")) {
    e.cls.decoded.pairs = j["decoded"].at("pairs").get<std::vector<int>>();
    e.cls.decoded.rankLoss = j["decoded"].at("rank_loss").get<bool>();
  } else {
    e.cls.decoded = decode_flips(e.z);
  }
  if (j.contains("reason")) e.cls.reason = reason_from_string(j["reason"].get<std::string>());
  return e;
}

json to_json(const ScanOptions& o) {
  const auto& c = o.controls;
  return {{"tolstep", c.tolstep},
          {"h_min", c.hMin},
          {"h_max", c.hMax},
          {"h_init", c.hInit},
          {"tol_distinct", c.tolDistinct},
          {"sign_floor", c.signFloor},
          {"backend", c.backend == Backend::Svd ? "svd" : "doubled"},
          {"confidence", o.confidence},
          {"refine_depth", o.refineDepth},
          {"nudge", o.nudge}};
}

json report_to_json(const ScanReport& r, const json& field) {
  json events = json::array();
  for (const auto& e : r.events) events.push_back(to_json(e));
  const auto& d = r.grid.domain;
  return {{"schema", kScanSchema},
          {"n", r.n},
          {"field", field},
          {"grid", {{"m", r.grid.m}, {"k", r.grid.k}, {"domain", {d.x0, d.x1, d.y0, d.y1}}}},
          {"options", to_json(r.options)},
          {"rows_completed", r.rowsCompleted},
          {"counts", to_json(r.counts)},
          {"events", events}};
}

CountRow count_row_from_report(const json& doc) {
  if (doc.value("schema", "") != kScanSchema) throw Error("not a scan report document");
  CountRow row;
  row.n = doc.at("n").get<Index>();
  row.realization = doc.at("field").value("realization", 0);
  const auto c = counts_from_json(doc.at("counts"));
  row.coalescenceCount = c.coalescence_total();
  row.rankLossCount = c.rankLoss;
  row.inconclusiveCount = c.inconclusive;
  return row;
}

void write_events_csv(std::ostream& out, const ScanReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "i,j,depth,x0,x1,y0,y1,kind,pair,confidence,z\n";
  for (const auto& e : r.events) {
    os << e.i << ',' << e.j << ',' << e.depth << ',' << e.rect.x0 << ',' << e.rect.x1 << ','
       << e.rect.y0 << ',' << e.rect.y1 << ',' << to_string(e.cls.kind) << ',' << e.cls.pair << ','
       << e.confidence << ',';
    for (std::size_t k = 0; k < e.z.size(); ++k) os << (k ? " " : "") << e.z[k];
    os << '\n';
  }
  out << os.str();
}

Checkpoint::State Checkpoint::load(const std::string& path, const json& job) {
  State st;
  std::ifstream in(path);
  if (!in) return st;
  std::string line;
  if (!std::getline(in, line)) return st;
  const json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("schema", "") != kCheckpointSchema ||
      header.value("job", json()) != job)
    return st;
  while (std::getline(in, line)) {
    const json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded()) break;
    if (rec.at("row").get<int>() != st.rowsCompleted) break;
    for (const auto& e : rec.at("events")) st.events.push_back(event_from_json(e));
    st.counts = counts_from_json(rec.at("counts"));
    st.rowsCompleted += 1;
    st.lines.push_back(line);
  }
  return st;
}

Checkpoint::Checkpoint(const std::string& path, const json& job, const State& resume)
    : path_(path) {
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint '" + path_ + "'");
  out << json{{"schema", kCheckpointSchema}, {"job", job}}.dump() << '\n';
  for (const auto& l : resume.lines) out << l << '\n';
}

void Checkpoint::record_row(int row, const std::vector<BoxEvent>& rowEvents,
                            const ScanCounts& running) {
  json events = json::array();
  for (const auto& e : rowEvents) events.push_back(to_json(e));
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error("cannot append to checkpoint '" + path_ + "'");
  out << json{{"row", row}, {"events", events}, {"counts", to_json(running)}}.dump() << '\n';
  out.flush();
}

json to_json(const FitResult& f) {
  return {{"c", f.c},
          {"q", f.q},
          {"residual", f.residual},
          {"pointCount", f.pointCount},
          {"excludedZeros", f.excludedZeros}};
}

}  // namespace takagi
