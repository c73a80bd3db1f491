#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bsmpc/bench/config.hpp"
#include "bsmpc/bench/loop.hpp"
#include "bsmpc/bench/pipeline.hpp"

namespace bsmpc::bench {

/// Shortest round-trip text for finite values, 17 significant digits at most.
std::string format_double(double v);

void write_summary(const std::vector<RunResult>& runs, std::ostream& out);
void write_cycles(const std::vector<RunResult>& runs, std::ostream& out);
void write_histograms(const std::vector<RunResult>& runs, std::ostream& out);
std::string manifest_json(const std::vector<RunResult>& runs, const ExperimentConfig& cfg,
                          const bsm::MarginPredictor* predictor = nullptr);

/// summary.csv, cycles.csv, pc_histogram.csv and manifest.json in `dir`.
void emit_reports(const std::vector<RunResult>& runs, const ExperimentConfig& cfg,
                  const std::string& dir, const bsm::MarginPredictor* predictor = nullptr);

/// One row per (point, seed); failed points get one row with the error.
void write_sweep(const std::vector<SweepPoint>& points, std::ostream& out);

struct LoggedRun {
  std::string model;
  std::string solver;
  std::uint64_t seed = 0;
  std::vector<CycleLog> cycles;
};

/// Parses cycles.csv back into per-run logs, in file order.
std::vector<LoggedRun> read_cycles(std::istream& in);
std::vector<LoggedRun> read_cycles(const std::string& path);

}  // namespace bsmpc::bench
