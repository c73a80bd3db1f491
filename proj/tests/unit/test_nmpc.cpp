#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "bsmpc/nmpc/cost.hpp"
#include "bsmpc/nmpc/evaluator.hpp"
#include "bsmpc/nmpc/feasibility.hpp"
#include "bsmpc/plant/sfjr.hpp"
#include "bsmpc/plant/uav.hpp"
#include "unit/toy_models.hpp"

using namespace bsmpc;
using namespace bsmpc::nmpc;
using doctest::Approx;

namespace {

ReferenceTrack constant_track(const StateVector& r, const InputVector& v, std::size_t len) {
  ReferenceTrack t;
  t.states.assign(len, r);
  t.inputs.assign(len, v);
  return t;
}

// Independent re-summation of the tracking cost.
double brute_cost(const plant::Model& model, const StateVector& x0, const HorizonSolution& z,
                  const ReferenceTrack& refs, std::size_t c) {
  const auto& s = model.spec();
  StateVector x = x0;
  double j = 0.0;
  for (int k = 0; k < s.h; ++k) {
    const InputVector u = z.input(k, s.n);
    x = model.step(x, u);
    const StateVector ex = refs.states[c + k + 1] - x;
    const InputVector eu = refs.inputs[c + k] - u;
    j += ex.dot(s.q.cwiseProduct(ex)) + eu.dot(s.r.cwiseProduct(eu));
  }
  j += x.dot(s.q_terminal.cwiseProduct(x));
  return j;
}

}  // namespace

TEST_CASE("rollout identities") {
  plant::SfjrModel sfjr;
  const auto& s = sfjr.spec();
  const HorizonSolution zero(s.h, s.n);
  const Rollout r = rollout(sfjr, StateVector::Zero(5), zero);
  REQUIRE(r.states.size() == static_cast<std::size_t>(s.h));
  for (const auto& x : r.states) CHECK(x.norm() == 0.0);

  HorizonSolution z(s.h, s.n);
  for (int k = 0; k < s.h; ++k) z.genes[k] = 0.1 * k;
  const Rollout r2 = rollout(sfjr, StateVector::Zero(5), z);
  CHECK(r2.states[0] == sfjr.step(StateVector::Zero(5), z.input(0, 1)));

  auto spec = testing::Integrator::make_spec(1, 1);
  testing::Integrator toy(spec);
  StateVector x0(1);
  x0 << 2.0;
  const Rollout r3 = rollout(toy, x0, HorizonSolution(1, 1));
  CHECK(r3.states[0][0] == 2.0);

  CHECK_THROWS_AS(rollout(sfjr, StateVector::Zero(5), HorizonSolution(3, 1)), DimensionError);
}

TEST_CASE("cost examples") {
  auto spec = testing::Integrator::make_spec(1, 1);
  testing::Integrator toy(spec);
  StateVector x0(1);
  x0 << 0.0;
  StateVector r(1);
  r << 0.7;
  const auto refs = constant_track(r, InputVector::Zero(1), 3);
  HorizonSolution z(1, 1);
  z.genes[0] = 0.2;
  CHECK(evaluate_cost(toy, x0, z, refs, 0) == Approx(0.25));
  z.genes[0] = 0.7;
  CHECK(evaluate_cost(toy, x0, z, refs, 0) == 0.0);
}

TEST_CASE("perfect tracking costs zero on a plant") {
  plant::UavModel uav;
  const auto& s = uav.spec();
  const StateVector x0 = StateVector::Zero(12);
  const InputVector v = uav.trim_input(x0);
  HorizonSolution z = constant_solution(v, s.h);
  ReferenceTrack refs = constant_track(x0, v, s.h + 1);
  const Rollout traj = rollout(uav, x0, z);
  for (int k = 0; k < s.h; ++k) refs.states[k + 1] = traj.states[k];
  CHECK(cost_from_rollout(s, traj, z, refs, 0) == 0.0);
}

TEST_CASE("cost matches brute-force summation on random instances") {
  auto spec = testing::Integrator::make_spec(3, 4);
  Rng rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    for (int j = 0; j < 3; ++j) {
      spec.q[j] = 1.0 + U(rng);
      spec.r[j] = 1.0 + U(rng);
      spec.q_terminal[j] = 1.0 + U(rng);
    }
    testing::Integrator toy(spec);
    ReferenceTrack refs;
    for (int k = 0; k < 8; ++k) {
      StateVector r(3);
      InputVector v(3);
      for (int j = 0; j < 3; ++j) {
        r[j] = U(rng);
        v[j] = U(rng);
      }
      refs.states.push_back(r);
      refs.inputs.push_back(v);
    }
    HorizonSolution z(4, 3);
    for (auto& g : z.genes) g = U(rng);
    StateVector x0(3);
    x0 << U(rng), U(rng), U(rng);
    const std::size_t c = static_cast<std::size_t>(trial % 3);
    const double a = evaluate_cost(toy, x0, z, refs, c);
    const double b = brute_cost(toy, x0, z, refs, c);
    CHECK(a >= 0.0);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("divergent rollout costs infinity") {
  auto spec = testing::Integrator::make_spec(1, 3, 10.0);
  spec.blowup_bound = 5.0;
  testing::Integrator toy(spec);
  HorizonSolution z(3, 1);
  z.genes = {4.0, 4.0, 4.0};
  const auto refs = constant_track(StateVector::Zero(1), InputVector::Zero(1), 4);
  const Rollout traj = rollout(toy, StateVector::Zero(1), z);
  CHECK(traj.diverged);
  CHECK(std::isinf(cost_from_rollout(spec, traj, z, refs, 0)));
}

TEST_CASE("fitness") {
  CHECK(fitness(0.0) == 1.0);
  CHECK(fitness(1.0) == 0.5);
  CHECK(fitness(3.0) == 0.25);
  CHECK(fitness(std::numeric_limits<double>::infinity()) == 0.0);
  double prev = 2.0;
  for (double j = 0.0; j < 100.0; j += 0.37) {
    CHECK(fitness(j) < prev);
    prev = fitness(j);
  }
}

TEST_CASE("feasibility screening") {
  plant::SfjrModel sfjr;
  const auto& s = sfjr.spec();
  const InputVector u_prev = InputVector::Zero(1);
  HorizonSolution z(s.h, s.n);
  for (int k = 0; k < s.h; ++k) z.genes[k] = 0.05 * k;
  Rollout traj = rollout(sfjr, StateVector::Zero(5), z);
  CHECK(check_feasibility(s, z, traj, u_prev).feasible());

  HorizonSolution bad = z;
  bad.genes[3] = s.u_max[0] + 0.1;
  traj = rollout(sfjr, StateVector::Zero(5), bad);
  const auto report = check_feasibility(s, bad, traj, u_prev);
  CHECK_FALSE(report.feasible());
  bool named = false;
  for (const auto& v : report.violations) {
    if (v.kind == Violation::Kind::kInputBound && v.step == 3 && v.index == 0) named = true;
  }
  CHECK(named);
  CHECK(report.violations.front().describe().find("step=") != std::string::npos);

  HorizonSolution jump(s.h, s.n);
  jump.genes[0] = 1.0;
  traj = rollout(sfjr, StateVector::Zero(5), jump);
  const auto r2 = check_feasibility(s, jump, traj, u_prev);
  CHECK_FALSE(r2.feasible());
  CHECK(r2.violations.front().kind == Violation::Kind::kRateBound);
}

TEST_CASE("uav attitude beyond its bound is infeasible") {
  plant::UavModel uav;
  auto spec = uav.spec();
  spec.du_min = InputVector::Constant(4, -100.0);
  spec.du_max = InputVector::Constant(4, 100.0);
  spec.h = 25;
  plant::UavModel wide(spec);
  const InputVector hover = wide.trim_input(StateVector::Zero(12));
  InputVector u = hover;
  u[0] = 3.0;
  u[2] = 9.0;
  HorizonSolution z = constant_solution(u, spec.h);
  const Rollout traj = rollout(wide, StateVector::Zero(12), z);
  const auto report = check_feasibility(spec, z, traj, u);
  CHECK_FALSE(report.feasible());
  bool pitch = false;
  for (const auto& v : report.violations) {
    if (v.kind == Violation::Kind::kStateBound && (v.index == 7 || v.index == 10)) pitch = true;
  }
  CHECK(pitch);
}

TEST_CASE("feasibility is monotone in the bounds") {
  auto tight = testing::Integrator::make_spec(2, 3, 0.5, 0.3);
  auto loose = testing::Integrator::make_spec(2, 3, 1.0, 0.6);
  testing::Integrator model(tight);
  Rng rng(5);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  for (int t = 0; t < 500; ++t) {
    HorizonSolution z(3, 2);
    for (auto& g : z.genes) g = U(rng);
    const Rollout traj = rollout(model, StateVector::Zero(2), z);
    if (check_feasibility(tight, z, traj, InputVector::Zero(2)).feasible()) {
      CHECK(check_feasibility(loose, z, traj, InputVector::Zero(2)).feasible());
    }
  }
}

TEST_CASE("terminal set") {
  Rollout traj;
  StateVector x(2);
  x << 1.0, 2.0;
  traj.states.push_back(x);
  CHECK(check_terminal(traj, TerminalSet::unbounded(2)));
  TerminalSet box{x, StateVector::Constant(2, 0.5)};
  CHECK(check_terminal(traj, box));
  traj.states.back()[1] = 2.5;
  CHECK(check_terminal(traj, box));
  traj.states.back()[1] = 2.5 + 1e-9;
  CHECK_FALSE(check_terminal(traj, box));
}

TEST_CASE("error vector") {
  auto spec = testing::Integrator::make_spec(2, 1);
  spec.q << 1.0, 2.0;
  StateVector a(2), b(2);
  a << 3.0, -1.0;
  b << 0.0, 0.0;
  const StateVector e = error_vector(a, b, spec);
  CHECK(e[0] == 9.0);
  CHECK(e[1] == 2.0);
  CHECK(error_vector(b, a, spec) == e);
  CHECK(error_vector(a, a, spec).norm() == 0.0);
  auto doubled = spec;
  doubled.q *= 2.0;
  CHECK(error_vector(a, b, doubled) == 2.0 * e);
}

TEST_CASE("repair projects onto the box and rate window") {
  auto spec = testing::Integrator::make_spec(1, 4, 1.0, 0.25);
  HorizonSolution z(4, 1);
  z.genes = {0.9, -0.9, 2.0, 0.0};
  z.cost = 1.0;
  repair(z, spec, InputVector::Zero(1));
  CHECK(z.genes[0] == 0.25);
  CHECK(z.genes[1] == 0.0);
  CHECK(z.genes[2] == 0.25);
  CHECK(z.genes[3] == 0.0);
  CHECK_FALSE(z.evaluated());

  HorizonSolution ok(4, 1);
  ok.genes = {0.1, 0.2, 0.3, 0.4};
  ok.cost = 2.0;
  repair(ok, spec, InputVector::Zero(1));
  CHECK(ok.evaluated());
}

TEST_CASE("time shift replicates the last step") {
  HorizonSolution z(std::vector<double>{1, 2, 3, 4, 5, 6});
  const HorizonSolution s = time_shift(z, 2);
  CHECK(s.genes == std::vector<double>{3, 4, 5, 6, 5, 6});
  CHECK_THROWS_AS(time_shift(HorizonSolution(std::vector<double>{1, 2, 3}), 2), DimensionError);
}

TEST_CASE("evaluator counts, skips evaluated candidates and honours the veto") {
  auto spec = testing::Integrator::make_spec(1, 2);
  testing::Integrator toy(spec);
  CycleProblem problem;
  problem.model = &toy;
  problem.x0 = StateVector::Zero(1);
  problem.refs = constant_track(StateVector::Zero(1), InputVector::Zero(1), 3);
  problem.u_prev = InputVector::Zero(1);
  problem.terminal = TerminalSet::unbounded(1);
  CandidateEvaluator ev(problem);
  std::vector<HorizonSolution> pop(3, HorizonSolution(2, 1));
  pop[1].genes = {0.5, 0.0};
  ev.evaluate_all(pop);
  CHECK(ev.evaluations() == 3);
  CHECK(pop[0].cost == 0.0);
  CHECK(pop[1].cost == Approx(0.5));
  ev.evaluate_all(pop);
  CHECK(ev.evaluations() == 3);

  problem.veto = [](const HorizonSolution&) { return true; };
  HorizonSolution z(2, 1);
  CandidateEvaluator ev2(problem);
  ev2.evaluate(z);
  CHECK(z.feasible == Feasibility::kNo);
}
