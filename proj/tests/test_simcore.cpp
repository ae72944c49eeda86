#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "remote_track/errors.hpp"
#include "remote_track/integrator.hpp"
#include "remote_track/vanderpol.hpp"

using namespace rtrack;

namespace {

VectorField zero_field(int dim) {
  VectorField f;
  f.dimension = dim;
  f.eval = [](std::span<const double>, std::span<double> dx) {
    for (double& v : dx) v = 0.0;
  };
  return f;
}

VectorField decay_field() {
  VectorField f;
  f.dimension = 1;
  f.eval = [](std::span<const double> x, std::span<double> dx) {
    dx[0] = -x[0];
  };
  return f;
}

VectorField harmonic_field() {
  VectorField f;
  f.dimension = 2;
  f.eval = [](std::span<const double> x, std::span<double> dx) {
    dx[0] = x[1];
    dx[1] = -x[0];
  };
  return f;
}

}  // namespace

TEST_CASE("zero field keeps the state constant") {
  const Trajectory traj = integrate_flow(zero_field(3), {1.0, -2.0, 0.5}, 0.0,
                                         2.0, 1e-2);
  for (const Vec& x : traj.states) {
    CHECK(x[0] == 1.0);
    CHECK(x[1] == -2.0);
    CHECK(x[2] == 0.5);
  }
}

TEST_CASE("exponential decay matches e^{-1} to 1e-9") {
  const Vec end = flow_endpoint(decay_field(), {1.0}, 0.0, 1.0, 1e-3);
  CHECK(std::abs(end[0] - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("harmonic oscillator returns after one period") {
  const double period = 2.0 * M_PI;
  const Vec end =
      flow_endpoint(harmonic_field(), {1.0, 0.0}, 0.0, period, period / 6284.0);
  CHECK(std::abs(end[0] - 1.0) < 1e-6);
  CHECK(std::abs(end[1]) < 1e-6);
}

TEST_CASE("step halving shows fourth-order convergence") {
  const double exact = std::exp(-1.0);
  auto err = [&](double h) {
    return std::abs(flow_endpoint(decay_field(), {1.0}, 0.0, 1.0, h)[0] -
                    exact);
  };
  const double e1 = err(1e-2), e2 = err(5e-3), e3 = err(2.5e-3);
  CHECK(e1 / e2 > 14.0);
  CHECK(e1 / e2 < 18.0);
  CHECK(e2 / e3 > 14.0);
  CHECK(e2 / e3 < 18.0);
}

TEST_CASE("periodic halving jumps under zero flow") {
  JumpSchedule half;
  half.period = 1.0;
  half.action = [](const Vec& x) { return Vec{x[0] / 2.0}; };
  const Trajectory traj =
      run_hybrid(zero_field(1), {5.0}, {half}, 2.0, 1e-2);
  std::vector<double> post;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.tags[i] == Trajectory::Tag::kPostJump) post.push_back(traj.states[i][0]);
  }
  REQUIRE(post.size() == 3);
  CHECK(post[0] == 2.5);
  CHECK(post[1] == 1.25);
  CHECK(post[2] == 0.625);
}

TEST_CASE("sawtooth: unit drift reset to zero each second") {
  VectorField drift;
  drift.dimension = 1;
  drift.eval = [](std::span<const double>, std::span<double> dx) { dx[0] = 1.0; };
  JumpSchedule reset;
  reset.period = 1.0;
  reset.action = [](const Vec&) { return Vec{0.0}; };
  const Trajectory traj = run_hybrid(drift, {0.3}, {reset}, 3.0, 1e-2);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.tags[i] == Trajectory::Tag::kPostJump) {
      CHECK(traj.states[i][0] == 0.0);
    } else if (traj.times[i] > 0.0) {
      const double frac = traj.times[i] - std::floor(traj.times[i] + 1e-12);
      const double expect =
          (traj.tags[i] == Trajectory::Tag::kPreJump && frac < 1e-9) ? 1.0
                                                                     : frac;
      CHECK(traj.states[i][0] == doctest::Approx(expect).epsilon(1e-9));
    }
  }
}

TEST_CASE("van der pol trajectory settles onto the limit cycle") {
  const VectorField f = vdp_field(1.5, 1.0);
  const Trajectory traj = integrate_flow(f, {1.0, 0.0}, 0.0, 40.0, 1e-3);
  // Points from the last ten seconds trace out (at least) one full loop;
  // everything after t = 10 must already be close to that set.
  std::vector<Vec> cycle;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.times[i] >= 30.0) cycle.push_back(traj.states[i]);
  }
  for (std::size_t i = 0; i < traj.size(); i += 25) {
    if (traj.times[i] < 10.0 || traj.times[i] >= 30.0) continue;
    double best = 1e30;
    for (const Vec& c : cycle) best = std::min(best, euclid_dist(traj.states[i], c));
    CHECK(best < 0.05);
  }
}

TEST_CASE("integration is bitwise deterministic") {
  const VectorField f = vdp_field(1.5, 1.0);
  const Trajectory a = integrate_flow(f, {1.0, 0.0}, 0.0, 5.0, 1e-3);
  const Trajectory b = integrate_flow(f, {1.0, 0.0}, 0.0, 5.0, 1e-3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.states[i] == b.states[i]);
    CHECK(a.times[i] == b.times[i]);
  }
}

TEST_CASE("non-integer step counts are rejected") {
  CHECK_THROWS_AS(integrate_flow(zero_field(1), {0.0}, 0.0, 1.0, 0.3),
                  StepMisaligned);
  JumpSchedule bad;
  bad.period = 0.35;  // not a multiple of h = 0.1
  bad.action = [](const Vec& x) { return x; };
  CHECK_THROWS_AS(run_hybrid(zero_field(1), {0.0}, {bad}, 1.0, 0.1),
                  StepMisaligned);
}

TEST_CASE("coinciding equal-order jumps are a conflict") {
  JumpSchedule a, b;
  a.period = b.period = 1.0;
  a.order = b.order = 0;
  a.action = b.action = [](const Vec& x) { return x; };
  CHECK_THROWS_AS(run_hybrid(zero_field(1), {0.0}, {a, b}, 1.0, 0.1),
                  ScheduleConflict);
  b.order = 1;  // distinct orders resolve the tie
  CHECK_NOTHROW(run_hybrid(zero_field(1), {0.0}, {a, b}, 1.0, 0.1));
}

TEST_CASE("divergence raises NonFiniteState") {
  VectorField blowup;
  blowup.dimension = 1;
  blowup.eval = [](std::span<const double> x, std::span<double> dx) {
    dx[0] = x[0] * x[0];
  };
  CHECK_THROWS_AS(integrate_flow(blowup, {10.0}, 0.0, 2.0, 1e-2),
                  NonFiniteState);
}
