#pragma once

#include <chrono>
#include <cstddef>

namespace bsmpc::ga {

/// Time source for the per-cycle budget. Solvers call `restart` at the start
/// of a cycle and `charge` after each batch of cost evaluations.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual void restart() = 0;
  /// Seconds since the last restart.
  virtual double elapsed() const = 0;
  virtual void charge(std::size_t /*evaluations*/) {}
};

class WallClock final : public Clock {
 public:
  void restart() override { start_ = std::chrono::steady_clock::now(); }
  double elapsed() const override {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Deterministic clock: every cost evaluation costs a fixed number of seconds.
class CountingClock final : public Clock {
 public:
  explicit CountingClock(double seconds_per_evaluation) : per_eval_(seconds_per_evaluation) {}
  void restart() override { now_ = 0.0; }
  double elapsed() const override { return now_; }
  void charge(std::size_t evaluations) override {
    now_ += per_eval_ * static_cast<double>(evaluations);
  }

 private:
  double per_eval_;
  double now_ = 0.0;
};

/// Frozen clock, advanced only by the test that owns it.
class ManualClock final : public Clock {
 public:
  void restart() override { now_ = start_; }
  double elapsed() const override { return now_ - start_; }
  void advance(double seconds) { now_ += seconds; }
  void set_start_offset(double seconds) { start_ = now_ = seconds; }

 private:
  double start_ = 0.0;
  double now_ = 0.0;
};

}  // namespace bsmpc::ga
