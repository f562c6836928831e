// takagi-cli: factorize, trace, scan, fit.

#include <glob.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "takagi/continuation.hpp"
#include "takagi/ensemble.hpp"
#include "takagi/fields.hpp"
#include "takagi/matrix_io.hpp"
#include "takagi/report.hpp"
#include "takagi/scan.hpp"
#include "takagi/stats.hpp"

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace fs = std::filesystem;
using nlohmann::json;
using namespace takagi;

namespace {

enum Exit {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kNotSymmetric = 3,
  kCoalescent = 4,
  kRankDeficient = 5,
  kInsufficient = 6,
};

std::map<std::string, std::string> parse_kv(const std::vector<std::string>& tokens) {
  std::map<std::string, std::string> kv;
  for (const auto& tok : tokens) {
    std::stringstream ss(tok);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error("expected key=value, got '" + item + "'");
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  return kv;
}

std::vector<double> parse_list(const std::string& s, std::size_t lo, std::size_t hi,
                               const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error("bad number '" + item + "' in " + what);
    out.push_back(v);
  }
  if (out.size() < lo || out.size() > hi) throw Error("wrong number of values in " + what);
  return out;
}

std::pair<int, int> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw Error("grid must be MxK, got '" + s + "'");
  const int m = std::stoi(s.substr(0, x));
  const int k = std::stoi(s.substr(x + 1));
  if (m <= 0 || k <= 0) throw Error("grid dimensions must be positive");
  return {m, k};
}

json error_json(const std::exception& e) {
  json j{{"error", "error"}, {"message", e.what()}};
  if (const auto* d = dynamic_cast<const DegenerateInput*>(&e)) {
    j["error"] = "degenerate_input";
    j["kind"] = d->kind() == DegeneracyKind::RankDeficient ? "rank_deficient" : "coalescent";
    j["pair"] = d->pair();
    j["gap"] = d->gap();
  } else if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    j["error"] = "parse_error";
    j["line"] = p->line();
  } else if (dynamic_cast<const NotSymmetric*>(&e)) {
    j["error"] = "not_symmetric";
  } else if (dynamic_cast<const InsufficientData*>(&e)) {
    j["error"] = "insufficient_data";
  } else if (dynamic_cast<const AllZeroCounts*>(&e)) {
    j["error"] = "all_zero_counts";
  }
  return j;
}

int exit_code(const std::exception& e) {
  if (const auto* d = dynamic_cast<const DegenerateInput*>(&e))
    return d->kind() == DegeneracyKind::RankDeficient ? kRankDeficient : kCoalescent;
  if (dynamic_cast<const ParseError*>(&e)) return kParse;
  if (dynamic_cast<const NotSymmetric*>(&e)) return kNotSymmetric;
  if (dynamic_cast<const InsufficientData*>(&e) || dynamic_cast<const AllZeroCounts*>(&e))
    return kInsufficient;
  return kFailure;
}

Backend parse_backend(const std::string& s) {
  if (s == "svd") return Backend::Svd;
  if (s == "doubled") return Backend::Doubled;
  throw Error("unknown backend '" + s + "'");
}

json complex_matrix_json(const CMatrix& a) {
  json rows = json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

void set_workers(int workers) {
  if (const char* env = std::getenv("TAKAGI_WORKERS")) workers = std::atoi(env);
  if (workers > 0) omp_set_num_threads(workers);
}

// ---------------------------------------------------------------- factorize

struct FactorizeArgs {
  std::string input;
  std::vector<std::string> random;
  std::string backend = "svd";
  double tolDistinct = kDefaultTolDistinct;
};

int cmd_factorize(const FactorizeArgs& a) {
  CMatrix m;
  json source;
  if (!a.random.empty()) {
    auto kv = parse_kv(a.random);
    if (!kv.count("n")) throw Error("--random needs n=<size>");
    const auto n = static_cast<Index>(std::stol(kv["n"]));
    const auto seed = kv.count("seed") ? std::stoull(kv["seed"]) : 0ull;
    Stream rng(seed);
    m = sample_matrix(n, rng).A.matrix();
    source = {{"random", {{"n", n}, {"seed", seed}}}};
  } else if (!a.input.empty()) {
    m = a.input == "-" ? read_matrix(std::cin) : read_matrix_file(a.input);
    source = {{"file", a.input}};
  } else {
    throw Error("give an input file or --random n=<size> seed=<s>");
  }
  const CSym sym(m);
  const auto pair = takagi::takagi(sym, parse_backend(a.backend), a.tolDistinct);
  const auto v = verify_takagi(sym, pair);
  json out{{"schema", "takagi-factorization/1"},
           {"source", source},
           {"backend", a.backend},
           {"n", pair.n()},
           {"S", std::vector<double>(pair.S.data(), pair.S.data() + pair.S.size())},
           {"U", complex_matrix_json(pair.U)},
           {"residual", v.residual},
           {"unitarity_defect", v.unitarityDefect},
           {"ordering_ok", v.orderingOk}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// -------------------------------------------------------------------- trace

struct TraceArgs {
  std::string field;
  std::string curve;
  std::string out;
  double tolstep = 1e-2;
  double hMin = ContinuationControls{}.hMin;
  double hMax = 0.1;
};

int cmd_trace(const TraceArgs& a) {
  const auto spec = parse_field_spec(a.field);
  const auto colon = a.curve.find(':');
  if (colon == std::string::npos) throw Error("curve must be segment:... or circle:...");
  const std::string kind = a.curve.substr(0, colon);
  const std::string args = a.curve.substr(colon + 1);

  std::vector<Point> pts;
  bool closed = false;
  if (kind == "segment") {
    const auto v = parse_list(args, 4, 4, "segment:x0,y0,x1,y1");
    pts = {{v[0], v[1]}, {v[2], v[3]}};
  } else if (kind == "circle") {
    const auto v = parse_list(args, 3, 4, "circle:cx,cy,r[,sides]");
    pts = circle_loop({v[0], v[1]}, v[2], v.size() == 4 ? static_cast<int>(v[3]) : 64);
    closed = true;
  } else {
    throw Error("unknown curve kind '" + kind + "'");
  }

  ContinuationControls c;
  c.tolstep = a.tolstep;
  c.hMin = a.hMin;
  c.hMax = a.hMax;
  const auto path = polyline_path(spec.field, pts, closed);
  const auto initial = takagi_svd(path(0.0), c.tolDistinct);
  const auto res = continue_path(path, initial, c);

  if (a.out.empty()) {
    write_trace_csv(std::cout, res.trace);
  } else {
    std::ofstream f(a.out);
    if (!f) throw Error("cannot write '" + a.out + "'");
    write_trace_csv(f, res.trace);
  }

  json summary{{"status", res.status == PathStatus::Completed ? "completed" : "halted_near_degeneracy"},
               {"accepted", res.accepted},
               {"failed", res.failed},
               {"last_t", res.status == PathStatus::Completed ? 1.0 : res.haltT}};
  if (closed && res.status == PathStatus::Completed) {
    RVector overlap;
    summary["flips"] = sign_alignment(res.final.U, initial.U, &overlap);
    summary["confidence"] = overlap.cwiseAbs().minCoeff();
  }
  std::cerr << summary.dump() << '\n';
  return kOk;
}

// --------------------------------------------------------------------- scan

struct ScanArgs {
  std::string field;
  std::vector<std::string> ensemble;
  std::string grid;
  std::string domain;
  std::string outDir = ".";
  std::string backend = "svd";
  int refineDepth = 1;
  double tolstep = 1e-2;
  double hMin = ContinuationControls{}.hMin;
  double hMax = 0.1;
  double tolDistinct = kDefaultTolDistinct;
  double confidence = kDefaultConfidence;
  int workers = 0;
  bool resume = false;
  int stopAfterRows = -1;
  bool quiet = false;
};

struct ScanTask {
  std::string stem;
  FieldSpec spec;
};

std::string sanitize(const std::string& s) {
  std::string out;
  for (char ch : s) out += std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' ? ch : '_';
  return out;
}

int run_scan_task(const ScanTask& task, const Grid& grid, const ScanOptions& opt,
                  const ScanArgs& a) {
  const fs::path dir(a.outDir);
  const auto ckPath = (dir / (task.stem + ".checkpoint.jsonl")).string();
  const json job{{"field", task.spec.description},
                 {"grid", {{"m", grid.m}, {"k", grid.k},
                           {"domain", {grid.domain.x0, grid.domain.x1, grid.domain.y0, grid.domain.y1}}}},
                 {"options", to_json(opt)}};

  Checkpoint::State state;
  if (a.resume) state = Checkpoint::load(ckPath, job);
  Checkpoint ck(ckPath, job, state);

  ScanProgress progress;
  progress.firstRow = state.rowsCompleted;
  progress.priorEvents = state.events;
  progress.priorCounts = state.counts;
  if (a.stopAfterRows >= 0) progress.stopRow = state.rowsCompleted + a.stopAfterRows;
  progress.onRowDone = [&](int row, const std::vector<BoxEvent>& ev, const ScanCounts& running) {
    ck.record_row(row, ev, running);
    if (!a.quiet)
      std::cerr << task.stem << ": row " << row + 1 << "/" << grid.k << ", events so far "
                << running.coalescence_total() + running.rankLoss << '\n';
  };

  if (!a.quiet && state.rowsCompleted > 0)
    std::cerr << task.stem << ": resuming at row " << state.rowsCompleted << '\n';
  const auto rep = grid_scan(task.spec.field, grid, opt, progress);
  if (rep.rowsCompleted < grid.k) {
    if (!a.quiet) std::cerr << task.stem << ": stopped after " << rep.rowsCompleted << " rows\n";
    return kOk;
  }

  {
    std::ofstream f(dir / (task.stem + ".json"));
    if (!f) throw Error("cannot write report in '" + a.outDir + "'");
    f << report_to_json(rep, task.spec.description).dump(2) << '\n';
  }
  {
    std::ofstream f(dir / (task.stem + ".events.csv"));
    write_events_csv(f, rep);
  }
  if (!a.quiet)
    std::cerr << task.stem << ": " << rep.counts.coalescence_total() << " coalescences, "
              << rep.counts.rankLoss << " rank losses, " << rep.counts.inconclusive
              << " inconclusive\n";
  return kOk;
}

int cmd_scan(const ScanArgs& a) {
  set_workers(a.workers);
  fs::create_directories(a.outDir);

  std::vector<ScanTask> tasks;
  std::string gridSpec = a.grid;
  if (!a.ensemble.empty()) {
    if (!a.field.empty()) throw Error("give either --field or --ensemble, not both");
    auto kv = parse_kv(a.ensemble);
    if (!kv.count("n") || !kv.count("seed")) throw Error("--ensemble needs n= and seed=");
    const long n = std::stol(kv["n"]);
    const auto seed = std::stoull(kv["seed"]);
    const long reals = kv.count("realizations") ? std::stol(kv["realizations"]) : 1;
    const long first = kv.count("first") ? std::stol(kv["first"]) : 0;
    if (kv.count("grid")) gridSpec = kv["grid"];
    for (long r = first; r < first + reals; ++r) {
      const std::string spec = "ensemble:n=" + std::to_string(n) + ",seed=" + std::to_string(seed) +
                               ",realization=" + std::to_string(r);
      tasks.push_back({"scan_n" + std::to_string(n) + "_seed" + std::to_string(seed) + "_r" +
                           std::to_string(r),
                       parse_field_spec(spec)});
    }
  } else if (!a.field.empty()) {
    tasks.push_back({"scan_" + sanitize(a.field), parse_field_spec(a.field)});
  } else {
    throw Error("give --field <spec> or --ensemble n=.. seed=..");
  }
  if (gridSpec.empty()) gridSpec = a.ensemble.empty() ? "8x8" : "128x64";
  const auto [m, k] = parse_grid(gridSpec);

  ScanOptions opt;
  opt.controls.tolstep = a.tolstep;
  opt.controls.hMin = a.hMin;
  opt.controls.hMax = a.hMax;
  opt.controls.tolDistinct = a.tolDistinct;
  opt.controls.backend = parse_backend(a.backend);
  opt.confidence = a.confidence;
  opt.refineDepth = a.refineDepth;

  for (const auto& t : tasks) {
    Rect domain = t.spec.field.domain;
    if (!a.domain.empty()) {
      const auto v = parse_list(a.domain, 4, 4, "--domain x0,x1,y0,y1");
      domain = {v[0], v[1], v[2], v[3]};
    }
    if (!(domain.x1 > domain.x0 && domain.y1 > domain.y0)) throw Error("empty domain");
    const int rc = run_scan_task(t, Grid{domain, m, k}, opt, a);
    if (rc != kOk) return rc;
  }
  return kOk;
}

// ---------------------------------------------------------------------- fit

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  auto add_dir = [&](const fs::path& d) {
    std::vector<std::string> found;
    for (const auto& e : fs::directory_iterator(d)) {
      if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path().string());
    }
    std::sort(found.begin(), found.end());
    files.insert(files.end(), found.begin(), found.end());
  };
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      add_dir(in);
    } else if (in.find_first_of("*?[") != std::string::npos) {
      glob_t g{};
      if (::glob(in.c_str(), 0, nullptr, &g) == 0)
        for (std::size_t i = 0; i < g.gl_pathc; ++i) files.emplace_back(g.gl_pathv[i]);
      globfree(&g);
    } else {
      files.push_back(in);
    }
  }
  return files;
}

void write_plot_csv(const fs::path& path, const std::vector<SeriesSummary>& rows,
                    const std::optional<FitResult>& fit) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f.precision(17);
  f << "n,meanCount,stdCount,fitted\n";
  for (const auto& r : rows) {
    f << r.n << ',' << r.mean << ',' << r.stddev << ',';
    if (fit) f << fit->c * std::pow(r.n, fit->q);
    f << '\n';
  }
}

struct FitArgs {
  std::vector<std::string> inputs;
  std::string outDir = ".";
};

int cmd_fit(const FitArgs& a) {
  CountSeries series;
  int skipped = 0;
  for (const auto& path : expand_inputs(a.inputs)) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    const json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || doc.value("schema", "") != kScanSchema) {
      ++skipped;
      continue;
    }
    series.push_back(count_row_from_report(doc));
  }
  if (skipped) std::cerr << "fit: skipped " << skipped << " non-report file(s)\n";

  auto points = [&](long CountRow::*field) {
    std::vector<CountPoint> pts;
    for (const auto& r : series) pts.push_back({static_cast<double>(r.n), static_cast<double>(r.*field)});
    return pts;
  };

  fs::create_directories(a.outDir);
  json out{{"schema", kFitSchema}, {"reports", series.size()}};
  const auto coal = fit_power_law(points(&CountRow::coalescenceCount));
  out["coalescence"] = to_json(coal);
  if (coal.excludedZeros)
    std::cerr << "fit: excluded " << coal.excludedZeros << " zero coalescence count(s)\n";
  write_plot_csv(fs::path(a.outDir) / "fit_coalescence.csv",
                 summarize(series, &CountRow::coalescenceCount), coal);

  std::optional<FitResult> rank;
  try {
    rank = fit_power_law(points(&CountRow::rankLossCount));
    out["rank_loss"] = to_json(*rank);
  } catch (const Error& e) {
    out["rank_loss"] = error_json(e);
  }
  write_plot_csv(fs::path(a.outDir) / "fit_rank_loss.csv",
                 summarize(series, &CountRow::rankLossCount), rank);

  std::ofstream f(fs::path(a.outDir) / "fit.json");
  if (!f) throw Error("cannot write fit.json");
  f << out.dump(2) << '\n';
  std::cout << out.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (openblas_set_num_threads) openblas_set_num_threads(1);

  CLI::App app{"Takagi factorization, continuation and degeneracy scanning"};
  app.require_subcommand(1);

  FactorizeArgs fa;
  auto* factorize = app.add_subcommand("factorize", "Takagi-factorize one complex symmetric matrix");
  factorize->add_option("input", fa.input, "matrix file ('-' for stdin)");
  factorize->add_option("--random", fa.random, "draw from the ensemble: n=<size> seed=<s>")
      ->expected(1, 2);
  factorize->add_option("--backend", fa.backend, "svd or doubled")->capture_default_str();
  factorize->add_option("--tol-distinct", fa.tolDistinct, "relative separation threshold")
      ->capture_default_str();

  TraceArgs ta;
  auto* trace = app.add_subcommand("trace", "Continue the factorization along a curve");
  trace->add_option("--field", ta.field, "field spec")->required();
  trace->add_option("--curve", ta.curve, "segment:x0,y0,x1,y1 or circle:cx,cy,r[,sides]")->required();
  trace->add_option("--out", ta.out, "trace CSV (default stdout)");
  trace->add_option("--tolstep", ta.tolstep)->capture_default_str();
  trace->add_option("--hmin", ta.hMin)->capture_default_str();
  trace->add_option("--hmax", ta.hMax)->capture_default_str();

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "Scan a parameter grid for degeneracies");
  scan->add_option("--field", sa.field, "field spec, e.g. demo-rankloss or ensemble:n=10,seed=1");
  scan->add_option("--ensemble", sa.ensemble,
                   "ensemble job: n=<n> seed=<s> [realizations=<r>] [first=<r0>] [grid=MxK]")
      ->expected(1, 5);
  scan->add_option("--grid", sa.grid, "MxK boxes (default 8x8 for fields, 128x64 for ensembles)");
  scan->add_option("--domain", sa.domain, "x0,x1,y0,y1 (default: the field's own domain)");
  scan->add_option("--out", sa.outDir, "output directory")->capture_default_str();
  scan->add_option("--refine-depth", sa.refineDepth)->capture_default_str();
  scan->add_option("--tolstep", sa.tolstep)->capture_default_str();
  scan->add_option("--hmin", sa.hMin)->capture_default_str();
  scan->add_option("--hmax", sa.hMax)->capture_default_str();
  scan->add_option("--tol-distinct", sa.tolDistinct)->capture_default_str();
  scan->add_option("--confidence", sa.confidence)->capture_default_str();
  scan->add_option("--backend", sa.backend, "svd or doubled")->capture_default_str();
  scan->add_option("--workers", sa.workers, "threads (0: OpenMP default; TAKAGI_WORKERS overrides)");
  scan->add_flag("--resume", sa.resume, "continue from the checkpoint in --out");
  scan->add_option("--stop-after-rows", sa.stopAfterRows, "scan at most this many rows, then exit");
  scan->add_flag("--quiet", sa.quiet);

  FitArgs fta;
  auto* fit = app.add_subcommand("fit", "Fit count = c n^q to scan reports");
  fit->add_option("inputs", fta.inputs, "report files, directories, or globs")->required();
  fit->add_option("--out", fta.outDir, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*factorize) return cmd_factorize(fa);
    if (*trace) return cmd_trace(ta);
    if (*scan) return cmd_scan(sa);
    if (*fit) return cmd_fit(fta);
  } catch (const std::exception& e) {
    std::cout << error_json(e).dump() << '\n';
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  }
  return kFailure;
}
