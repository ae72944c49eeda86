#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "remote_track/types.hpp"

namespace rtrack {

/// Autonomous vector field x |-> dx. `eval` must write exactly `dimension`
/// derivatives and be deterministic.
struct VectorField {
  int dimension = 0;
  std::function<void(std::span<const double> x, std::span<double> dx)> eval;
};

/// Time-scheduled state reset. Jump times are k*period + phase, k >= 0.
/// Coinciding jumps from distinct schedules are applied in increasing
/// `order`; equal orders at a shared instant are a ScheduleConflict.
struct JumpSchedule {
  double period = 0.0;
  double phase = 0.0;
  int order = 0;
  std::function<Vec(const Vec&)> action;
};

/// Sampled solution. At a jump instant two entries share one timestamp:
/// the flowed (pre-jump) value first, the reset (post-jump) value second.
struct Trajectory {
  enum class Tag : std::uint8_t { kFlow, kPreJump, kPostJump };

  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Tag> tags;

  std::size_t size() const { return times.size(); }
};

/// Classical fixed-step RK4 over [t0, t1]; (t1 - t0)/h must be an integer
/// (tolerance 1e-9). Throws NonFiniteState, StepMisaligned.
Trajectory integrate_flow(const VectorField& field, const Vec& x0, double t0,
                          double t1, double h);

/// Endpoint-only RK4 (no trajectory storage); same preconditions.
Vec flow_endpoint(const VectorField& field, const Vec& x0, double t0, double t1,
                  double h);

/// Runs the flow from t = 0 to t_end with the given jump schedules. Every
/// schedule period and phase must be an integer multiple of h. Throws
/// NonFiniteState, StepMisaligned, ScheduleConflict.
Trajectory run_hybrid(const VectorField& field, const Vec& x0,
                      const std::vector<JumpSchedule>& schedules, double t_end,
                      double h);

}  // namespace rtrack
