#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "takagi/scan.hpp"
#include "takagi/stats.hpp"

namespace takagi {

inline constexpr const char* kScanSchema = "takagi-scan/1";
inline constexpr const char* kCheckpointSchema = "takagi-checkpoint/1";
inline constexpr const char* kFitSchema = "takagi-fit/1";

nlohmann::json to_json(const ScanCounts& c);
ScanCounts counts_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BoxEvent& e);
BoxEvent event_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ScanOptions& o);

/// Full report document; `field` describes how to regenerate the field.
nlohmann::json report_to_json(const ScanReport& r, const nlohmann::json& field);

/// The subset of a report document needed for fitting.
CountRow count_row_from_report(const nlohmann::json& doc);

/// One line per event: i,j,depth,x0,x1,y0,y1,kind,pair,confidence,z.
void write_events_csv(std::ostream& out, const ScanReport& r);

/// Append-only JSON-lines checkpoint. The first line identifies the job;
/// each further line records one completed row with its events and the
/// running counts after it.
class Checkpoint {
 public:
  struct State {
    int rowsCompleted = 0;
    std::vector<BoxEvent> events;
    std::optional<ScanCounts> counts;
    std::vector<std::string> lines;  // valid row records, verbatim
  };

  /// Reads `path` if it exists and its header matches `job`; a truncated
  /// trailing line is ignored. Returns an empty state otherwise.
  static State load(const std::string& path, const nlohmann::json& job);

  /// Rewrites `path` as the header followed by the rows kept in `resume`
  /// (none when starting from scratch), then appends as rows complete.
  Checkpoint(const std::string& path, const nlohmann::json& job, const State& resume);
  Checkpoint(const std::string& path, const nlohmann::json& job)
      : Checkpoint(path, job, State{}) {}

  void record_row(int row, const std::vector<BoxEvent>& rowEvents, const ScanCounts& running);

 private:
  std::string path_;
};

nlohmann::json to_json(const FitResult& f);

}  // namespace takagi
