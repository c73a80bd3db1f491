#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bsmpc::bench {

struct CycleLog {
  std::size_t cycle = 0;
  double cost = 0.0;  ///< J of the applied solution
  bool converged = false;
  bool fallback = false;
  int population = 0;  ///< p_c
  int generations = 0;
  std::size_t evaluations = 0;
  std::size_t kernel_evaluations = 0;
  double time = 0.0;  ///< solver time as seen by the cycle clock
  double margin_ratio = 1.0;  ///< max_i psi_i / beta_i
  double confidence = 0.0;
  bool used_prediction = false;
  double error_max = 0.0;  ///< max of E_c
  std::string error;       ///< solver failure message, empty if none
};

struct Histogram {
  std::vector<double> edges;  ///< bins + 1 ascending edges
  std::vector<std::size_t> counts;

  std::size_t total() const;
  std::size_t occupied() const;
};

/// Equal-width bins over [lo, hi]; the last bin is closed, values outside are clamped.
Histogram make_histogram(std::span<const double> values, double lo, double hi, int bins);

struct RunMetrics {
  std::size_t cycles = 0;
  double avg_cost = 0.0;  ///< E
  double convergence_rate = 0.0;
  double avg_time = 0.0;
  double avg_evaluations = 0.0;
  std::size_t total_evaluations = 0;
  std::size_t fallbacks = 0;
  std::size_t predictions_used = 0;
  int min_population = 0;
  int max_population = 0;
  Histogram pc_histogram;
};

/// Arithmetic means over the log; the p_c histogram has 10 bins over [xi, nu].
RunMetrics compute_metrics(std::span<const CycleLog> log, int xi, int nu);

double median(std::vector<double> values);

}  // namespace bsmpc::bench
