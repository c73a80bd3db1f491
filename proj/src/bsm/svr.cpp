#include "bsmpc/bsm/svr.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <unordered_map>
#include <vector>

namespace bsmpc::bsm {

double gaussian_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    d2 += d * d;
  }
  return std::exp(-d2 / gamma);
}

double kernel(KernelKind kind, std::span<const double> x, std::span<const double> y,
              double gamma) {
  if (kind == KernelKind::kLinear) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
  }
  return gaussian_kernel(x, y, gamma);
}

void SvrParams::validate() const {
  if (!(C > 0.0)) throw ConfigError("svr: C must be positive");
  if (!(lambda >= 0.0)) throw ConfigError("svr: lambda must be non-negative");
  if (!(gamma > 0.0)) throw ConfigError("svr: gamma must be positive");
  if (!(tolerance > 0.0)) throw ConfigError("svr: tolerance must be positive");
  if (max_iterations < 1) throw ConfigError("svr: max_iterations must be positive");
}

double SvrModel::predict(std::span<const double> x, std::size_t* kernel_evaluations) const {
  if (n_s() > 0 && static_cast<int>(x.size()) != dims()) {
    throw DimensionError("svr predict: expected " + std::to_string(dims()) + " features");
  }
  double f = bias;
  const auto cols = static_cast<std::size_t>(support_vectors.cols());
  for (int j = 0; j < n_s(); ++j) {
    f += dual_coefs[j] * bsm::kernel(kind, std::span(support_vectors.row(j).data(), cols), x, gamma);
  }
  if (kernel_evaluations) *kernel_evaluations += static_cast<std::size_t>(n_s());
  return f;
}

double SvrModel::confidence(std::span<const double> x, double cap) const {
  if (n_s() == 0) return 0.0;
  if (static_cast<int>(x.size()) != dims()) {
    throw DimensionError("svr confidence: expected " + std::to_string(dims()) + " features");
  }
  double total = 0.0;
  for (int j = 0; j < n_s(); ++j) {
    double d2 = 0.0;
    for (int k = 0; k < dims(); ++k) {
      const double d = x[static_cast<std::size_t>(k)] - support_vectors(j, k);
      d2 += d * d;
    }
    total += std::sqrt(d2);
  }
  if (total <= 0.0) return cap;
  return std::min(1.0 / total, cap);
}

namespace {

/// LRU cache of kernel rows K(i, .) over the l training points.
class KernelCache {
 public:
  KernelCache(const RowMatrix& x, const SvrParams& p)
      : x_(x), p_(p), l_(static_cast<std::size_t>(x.rows())) {
    const std::size_t row_bytes = std::max<std::size_t>(l_ * sizeof(double), 1);
    capacity_ = std::max<std::size_t>(2, p.cache_bytes / row_bytes);
    diag_.resize(l_);
    for (std::size_t i = 0; i < l_; ++i) diag_[i] = eval(i, i);
  }

  const std::vector<double>& row(std::size_t i) {
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    if (lru_.size() >= capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    std::vector<double> r(l_);
    for (std::size_t k = 0; k < l_; ++k) r[k] = eval(i, k);
    lru_.emplace_front(i, std::move(r));
    index_[i] = lru_.begin();
    return lru_.front().second;
  }

  double diag(std::size_t i) const { return diag_[i]; }
  double eval(std::size_t i, std::size_t k) const {
    const auto cols = static_cast<std::size_t>(x_.cols());
    return kernel(p_.kernel, std::span(x_.row(static_cast<Eigen::Index>(i)).data(), cols),
                  std::span(x_.row(static_cast<Eigen::Index>(k)).data(), cols), p_.gamma);
  }

 private:
  using Entry = std::pair<std::size_t, std::vector<double>>;
  const RowMatrix& x_;
  const SvrParams& p_;
  std::size_t l_;
  std::size_t capacity_;
  std::vector<double> diag_;
  std::list<Entry> lru_;
  std::unordered_map<std::size_t, std::list<Entry>::iterator> index_;
};

constexpr double kTau = 1e-12;

}  // namespace

SvrModel train_svr(const RowMatrix& features, const Eigen::VectorXd& targets,
                   const SvrParams& params) {
  params.validate();
  const auto l = static_cast<std::size_t>(features.rows());
  if (l < 2) throw ConfigError("svr: need at least two training records");
  if (static_cast<std::size_t>(targets.size()) != l) {
    throw DimensionError("svr: feature and target counts differ");
  }
  if (!features.allFinite() || !targets.allFinite()) {
    throw ConfigError("svr: training data must be finite");
  }

  // Variables 0..l-1 are alpha+, l..2l-1 are alpha-; sign[t] is +1 / -1.
  const std::size_t n2 = 2 * l;
  const double C = params.C;
  std::vector<double> a(n2, 0.0), grad(n2);
  std::vector<signed char> sign(n2);
  for (std::size_t t = 0; t < l; ++t) {
    sign[t] = 1;
    sign[t + l] = -1;
    grad[t] = params.lambda - targets[static_cast<Eigen::Index>(t)];
    grad[t + l] = params.lambda + targets[static_cast<Eigen::Index>(t)];
  }
  KernelCache cache(features, params);
  auto upper = [&](std::size_t t) { return sign[t] > 0 ? a[t] < C : a[t] > 0.0; };
  auto lower = [&](std::size_t t) { return sign[t] > 0 ? a[t] > 0.0 : a[t] < C; };

  long iter = 0;
  double violation = INFINITY;
  for (;;) {
    // Second-order working-set selection.
    double gmax = -INFINITY, gmax2 = -INFINITY;
    std::size_t i = n2;
    for (std::size_t t = 0; t < n2; ++t) {
      if (upper(t) && -sign[t] * grad[t] >= gmax) {
        gmax = -sign[t] * grad[t];
        i = t;
      }
    }
    std::size_t j = n2;
    double best_obj = INFINITY;
    if (i < n2) {
      const auto& ki = cache.row(i % l);
      for (std::size_t t = 0; t < n2; ++t) {
        if (!lower(t)) continue;
        const double yg = sign[t] * grad[t];
        gmax2 = std::max(gmax2, yg);
        const double b = gmax + yg;
        if (b > 0.0) {
          double quad = cache.diag(i % l) + cache.diag(t % l) - 2.0 * ki[t % l];
          if (quad <= 0.0) quad = kTau;
          const double obj = -(b * b) / quad;
          if (obj <= best_obj) {
            best_obj = obj;
            j = t;
          }
        }
      }
    }
    violation = gmax + gmax2;
    if (violation < params.tolerance || j == n2) break;
    if (iter >= params.max_iterations) {
      throw TrainingError("svr: no convergence after " + std::to_string(iter) +
                              " iterations (KKT violation " + std::to_string(violation) + ")",
                          violation);
    }
    ++iter;

    const auto& ki = cache.row(i % l);
    const double kij = ki[j % l];
    const double qij = sign[i] * sign[j] * kij;
    const double old_ai = a[i], old_aj = a[j];
    if (sign[i] != sign[j]) {
      double quad = cache.diag(i % l) + cache.diag(j % l) + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0.0) {
        if (a[j] < 0.0) {
          a[j] = 0.0;
          a[i] = diff;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = -diff;
      }
      if (diff > 0.0) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = C - diff;
        }
      } else if (a[j] > C) {
        a[j] = C;
        a[i] = C + diff;
      }
    } else {
      double quad = cache.diag(i % l) + cache.diag(j % l) - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > C) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = sum - C;
        }
      } else if (a[j] < 0.0) {
        a[j] = 0.0;
        a[i] = sum;
      }
      if (sum > C) {
        if (a[j] > C) {
          a[j] = C;
          a[i] = sum - C;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = sum;
      }
    }
    const double dai = a[i] - old_ai, daj = a[j] - old_aj;
    // Capacity >= 2 and row i is most recent, so fetching row j keeps it alive.
    const auto& kj = cache.row(j % l);
    for (std::size_t t = 0; t < n2; ++t) {
      grad[t] += sign[t] * (sign[i] * ki[t % l] * dai + sign[j] * kj[t % l] * daj);
    }
  }

  // Bias from the free support vectors; KKT midpoint when there are none.
  std::vector<double> beta(l);
  for (std::size_t t = 0; t < l; ++t) beta[t] = a[t] - a[t + l];
  double bsum = 0.0;
  int nfree = 0;
  double ub = INFINITY, lb = -INFINITY;
  for (std::size_t t = 0; t < n2; ++t) {
    const double yg = sign[t] * grad[t];
    const bool at_upper = a[t] >= C, at_lower = a[t] <= 0.0;
    if (!at_upper && !at_lower) {
      bsum += -yg;
      ++nfree;
    } else if ((at_upper && sign[t] < 0) || (at_lower && sign[t] > 0)) {
      ub = std::min(ub, -yg);
    } else {
      lb = std::max(lb, -yg);
    }
  }
  double bias;
  if (nfree > 0) {
    bias = bsum / nfree;
  } else if (std::isfinite(ub) && std::isfinite(lb)) {
    bias = (ub + lb) / 2.0;
  } else {
    bias = std::isfinite(ub) ? ub : (std::isfinite(lb) ? lb : 0.0);
  }

  SvrModel model;
  model.kind = params.kernel;
  model.gamma = params.gamma;
  model.C = C;
  model.lambda = params.lambda;
  model.bias = bias;
  model.iterations = iter;
  model.kkt_violation = violation;
  std::vector<std::size_t> sv;
  for (std::size_t t = 0; t < l; ++t) {
    if (beta[t] != 0.0) sv.push_back(t);
  }
  model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), features.cols());
  model.dual_coefs.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t s = 0; s < sv.size(); ++s) {
    model.support_vectors.row(static_cast<Eigen::Index>(s)) =
        features.row(static_cast<Eigen::Index>(sv[s]));
    model.dual_coefs[static_cast<Eigen::Index>(s)] = beta[sv[s]];
  }
  return model;
}

double median_squared_distance(const RowMatrix& features, std::size_t max_rows) {
  const auto rows = std::min<std::size_t>(static_cast<std::size_t>(features.rows()), max_rows);
  std::vector<double> d;
  d.reserve(rows * (rows - 1) / 2);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = i + 1; k < rows; ++k) {
      d.push_back((features.row(static_cast<Eigen::Index>(i)) -
                   features.row(static_cast<Eigen::Index>(k)))
                      .squaredNorm());
    }
  }
  if (d.empty()) return 1.0;
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid > 0.0 ? *mid : 1.0;
}

}  // namespace bsmpc::bsm
