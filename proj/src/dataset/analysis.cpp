#include "bsmpc/dataset/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bsmpc::dataset {

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
    i = j + 1;
  }
  return rank;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("spearman: length mismatch");
  if (a.size() < 2) throw ConfigError("spearman: need at least two points");
  return pearson(average_ranks(a), average_ranks(b));
}

BinnedRelation binned_error_margin(const std::vector<CycleRecord>& records,
                                   const InputVector& beta, int bins) {
  if (bins < 2) throw ConfigError("binned_error_margin: need at least two bins");
  if (records.size() < static_cast<std::size_t>(bins)) {
    throw ConfigError("binned_error_margin: fewer records than bins");
  }
  std::vector<std::pair<double, double>> pts;
  pts.reserve(records.size());
  for (const auto& r : records) {
    if (r.deltas.size() != beta.size()) throw DimensionError("binned_error_margin: beta size");
    double d = 0.0;
    for (int i = 0; i < beta.size(); ++i) d = std::max(d, r.deltas[i] / beta[i]);
    pts.emplace_back(r.error.maxCoeff(), d);
  }
  std::stable_sort(pts.begin(), pts.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  BinnedRelation out;
  const std::size_t n = pts.size();
  const auto nb = static_cast<std::size_t>(bins);
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * n / nb, hi = (b + 1) * n / nb;
    double se = 0.0, sd = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      se += pts[k].first;
      sd += pts[k].second;
    }
    const auto cnt = static_cast<double>(hi - lo);
    out.error_max.push_back(se / cnt);
    out.delta_max.push_back(sd / cnt);
  }
  out.spearman = spearman(out.error_max, out.delta_max);
  return out;
}

}  // namespace bsmpc::dataset
