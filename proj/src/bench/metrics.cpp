#include "bsmpc/bench/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "bsmpc/common.hpp"

namespace bsmpc::bench {

std::size_t Histogram::total() const {
  std::size_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

std::size_t Histogram::occupied() const {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(),
                                                [](std::size_t c) { return c > 0; }));
}

Histogram make_histogram(std::span<const double> values, double lo, double hi, int bins) {
  if (bins < 1 || !(hi >= lo)) throw ConfigError("histogram: need bins >= 1 and hi >= lo");
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + (hi - lo) * b / bins);
  const double width = (hi - lo) / bins;
  for (double v : values) {
    int b = width > 0.0 ? static_cast<int>(std::floor((v - lo) / width)) : 0;
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

RunMetrics compute_metrics(std::span<const CycleLog> log, int xi, int nu) {
  RunMetrics m;
  m.cycles = log.size();
  std::vector<double> pops;
  pops.reserve(log.size());
  double cost = 0.0, conv = 0.0, time = 0.0;
  for (const auto& c : log) {
    cost += c.cost;
    conv += c.converged ? 1.0 : 0.0;
    time += c.time;
    m.total_evaluations += c.evaluations;
    m.fallbacks += c.fallback ? 1 : 0;
    m.predictions_used += c.used_prediction ? 1 : 0;
    pops.push_back(c.population);
  }
  if (!log.empty()) {
    const double h = static_cast<double>(log.size());
    m.avg_cost = cost / h;
    m.convergence_rate = conv / h;
    m.avg_time = time / h;
    m.avg_evaluations = static_cast<double>(m.total_evaluations) / h;
    m.min_population = static_cast<int>(*std::min_element(pops.begin(), pops.end()));
    m.max_population = static_cast<int>(*std::max_element(pops.begin(), pops.end()));
  }
  m.pc_histogram = make_histogram(pops, xi, nu, 10);
  return m;
}

double median(std::vector<double> v) {
  if (v.empty()) throw ConfigError("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

}  // namespace bsmpc::bench
