#include "remote_track/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "remote_track/errors.hpp"

namespace rtrack {
namespace {

long long aligned_steps(double span, double h, const char* what) {
  const double ratio = span / h;
  const long long n = std::llround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9) {
    throw StepMisaligned(std::string(what) + " is not an integer multiple of the step size");
  }
  return n;
}

struct Rk4Scratch {
  Vec k1, k2, k3, k4, tmp;

  explicit Rk4Scratch(std::size_t n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
};

void check_finite(const Vec& v, const char* what) {
  if (!all_finite(v)) {
    throw NonFiniteState(std::string("non-finite ") + what + " during integration");
  }
}

void rk4_step(const VectorField& f, Vec& x, double h, Rk4Scratch& s) {
  const std::size_t n = x.size();
  f.eval(x, s.k1);
  check_finite(s.k1, "derivative");
  for (std::size_t i = 0; i < n; ++i) s.tmp[i] = x[i] + 0.5 * h * s.k1[i];
  f.eval(s.tmp, s.k2);
  check_finite(s.k2, "derivative");
  for (std::size_t i = 0; i < n; ++i) s.tmp[i] = x[i] + 0.5 * h * s.k2[i];
  f.eval(s.tmp, s.k3);
  check_finite(s.k3, "derivative");
  for (std::size_t i = 0; i < n; ++i) s.tmp[i] = x[i] + h * s.k3[i];
  f.eval(s.tmp, s.k4);
  check_finite(s.k4, "derivative");
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += (h / 6.0) * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
  }
  check_finite(x, "state");
}

}  // namespace

Trajectory integrate_flow(const VectorField& field, const Vec& x0, double t0,
                          double t1, double h) {
  const long long n = aligned_steps(t1 - t0, h, "(t1 - t0)/h");
  Trajectory traj;
  traj.times.reserve(n + 1);
  traj.states.reserve(n + 1);
  traj.tags.reserve(n + 1);

  Vec x = x0;
  Rk4Scratch scratch(x.size());
  traj.times.push_back(t0);
  traj.states.push_back(x);
  traj.tags.push_back(Trajectory::Tag::kFlow);
  for (long long i = 0; i < n; ++i) {
    rk4_step(field, x, h, scratch);
    traj.times.push_back(t0 + static_cast<double>(i + 1) * h);
    traj.states.push_back(x);
    traj.tags.push_back(Trajectory::Tag::kFlow);
  }
  if (n > 0) traj.times.back() = t0 + static_cast<double>(n) * h;
  return traj;
}

Vec flow_endpoint(const VectorField& field, const Vec& x0, double t0, double t1,
                  double h) {
  const long long n = aligned_steps(t1 - t0, h, "(t1 - t0)/h");
  Vec x = x0;
  Rk4Scratch scratch(x.size());
  for (long long i = 0; i < n; ++i) rk4_step(field, x, h, scratch);
  return x;
}

Trajectory run_hybrid(const VectorField& field, const Vec& x0,
                      const std::vector<JumpSchedule>& schedules, double t_end,
                      double h) {
  const long long n = aligned_steps(t_end, h, "t_end/h");

  struct StepSchedule {
    long long period_steps;
    long long phase_steps;
    int order;
    const JumpSchedule* js;
  };
  std::vector<StepSchedule> steps;
  steps.reserve(schedules.size());
  for (const auto& js : schedules) {
    StepSchedule s;
    s.period_steps = aligned_steps(js.period, h, "schedule period");
    s.phase_steps = aligned_steps(js.phase, h, "schedule phase");
    if (s.period_steps <= 0) throw StepMisaligned("schedule period must be positive");
    s.order = js.order;
    s.js = &js;
    steps.push_back(s);
  }

  // Schedules firing at grid index i, sorted by order; equal orders conflict.
  std::vector<const JumpSchedule*> due;
  auto collect_due = [&](long long i) {
    due.clear();
    for (const auto& s : steps) {
      if (i >= s.phase_steps && (i - s.phase_steps) % s.period_steps == 0) {
        due.push_back(s.js);
      }
    }
    std::stable_sort(due.begin(), due.end(),
                     [](const JumpSchedule* a, const JumpSchedule* b) {
                       return a->order < b->order;
                     });
    for (std::size_t j = 1; j < due.size(); ++j) {
      if (due[j]->order == due[j - 1]->order) {
        throw ScheduleConflict("two schedules share a jump time with equal order");
      }
    }
  };

  Trajectory traj;
  traj.times.reserve(n + 8);
  traj.states.reserve(n + 8);
  traj.tags.reserve(n + 8);

  Vec x = x0;
  Rk4Scratch scratch(x.size());

  auto record = [&](double t, Trajectory::Tag tag) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.tags.push_back(tag);
  };

  auto apply_jumps = [&](long long i) {
    collect_due(i);
    if (due.empty()) return false;
    const double t = static_cast<double>(i) * h;
    record(t, Trajectory::Tag::kPreJump);
    for (const JumpSchedule* js : due) {
      x = js->action(x);
      check_finite(x, "post-jump state");
    }
    record(t, Trajectory::Tag::kPostJump);
    return true;
  };

  if (!apply_jumps(0)) record(0.0, Trajectory::Tag::kFlow);
  for (long long i = 0; i < n; ++i) {
    rk4_step(field, x, h, scratch);
    if (!apply_jumps(i + 1)) {
      record(static_cast<double>(i + 1) * h, Trajectory::Tag::kFlow);
    }
  }
  return traj;
}

}  // namespace rtrack
