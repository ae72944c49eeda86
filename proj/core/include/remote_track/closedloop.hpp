#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "remote_track/codec.hpp"
#include "remote_track/integrator.hpp"
#include "remote_track/regulator.hpp"
#include "remote_track/types.hpp"

namespace rtrack {

/// Relative-degree-1 plant:  z' = f(z, y, mu),  y' = q(z, y, mu) + u.
/// f and q may be empty when n == 0 / the drift is zero.
struct PlantSpec {
  int n = 0;
  std::function<void(std::span<const double> z, double y,
                     std::span<const double> mu, std::span<double> dz)>
      f;
  std::function<double(std::span<const double> z, double y,
                       std::span<const double> mu)>
      q;
  Vec mu;
};

/// Under-sampled second-level decoder: w_d' is reset to w_d every
/// ell * t_bar seconds and drives e_hat instead of w_d.
struct SecondLevel {
  int ell = 1;
  double t_bar = 0.0;
};

struct Scenario {
  ExoSpec exo;
  int n_bits = 0;
  double T = 0.0;
  int expansion_pairs = 2000;
  std::uint64_t expansion_seed = 1;
  std::optional<double> m_t_override;
  std::optional<int> levels_override;
  bool auto_margin = true;  // derive exo.w_margin from sqrt(r)*L0/(2N) + 0.5

  PlantSpec plant;
  InternalModelSpec im;
  GainSpec gains;
  std::optional<SecondLevel> second_level;

  double t_end = 0.0;
  double h = 1e-3;
  double t_tail = 0.0;
  Vec w_init, codec_init, z_init, xi_init;
  double y_init = 0.0;
  double state_ceiling = 1e3;
};

/// Channel parameters derived from a scenario before the run.
struct ChannelSetup {
  int levels = 0;
  double L0 = 0.0;
  double m_t = 1.0;
  double margin = 0.0;
  Box working_region;
  bool rate_ok = false;
};

ChannelSetup prepare_channel(const Scenario& sc);

/// Offsets of the composite state (w, w_e, w_d, w_d', z, y, xi).
struct StateLayout {
  int r = 0, n = 0, d = 0;
  bool has_second_level = false;
  int w = 0, w_e = 0, w_d = 0, w_dp = 0, z = 0, y = 0, xi = 0;
  int total = 0;

  static StateLayout make(int r, int n, int d, bool second_level);
};

struct SampleRecord {
  long k = 0;
  double t = 0.0;
  double L_used = 0.0;  // zoom length consumed by this sample's jump
  double L_next = 0.0;  // zoom length after the contraction
  SymbolVector symbols;
  ChannelFrame frame;
};

struct RunMetrics {
  double tail_tracking_error = 0.0;
  double tail_decoder_error = 0.0;
  double max_state_norm = 0.0;
  double l_decay_ratio = 0.0;
  double m_t = 1.0;
  int levels = 0;
  double L0 = 0.0;
  bool rate_ok = false;
  long saturated_samples = 0;
};

struct RunResult {
  StateLayout layout;
  ChannelSetup channel;
  Trajectory trajectory;
  std::vector<SampleRecord> samples;
  // Per-trajectory-row diagnostics.
  std::vector<double> e, e_hat, dec_err, u, zoom;
  RunMetrics metrics;
};

/// Executes the full hybrid closed loop. Deterministic for a fixed
/// scenario. Throws NonFiniteState (divergence), StepMisaligned,
/// ConfigError on invariant violations.
RunResult run_scenario(const Scenario& sc);

/// Pointwise tracking error y - y_r(w) over a composite trajectory.
std::vector<double> compute_tracking_error(
    const Trajectory& traj, const StateLayout& layout,
    const std::function<double(std::span<const double>)>& y_r);

/// sup{|v(t)| : t >= t_tail}.
double tail_sup(const std::vector<double>& times, const std::vector<double>& v,
                double t_tail);

/// Smallest positive integer ell with ell * t_bar >= t_star.
int check_dwell_compat(double t_star_estimate, double t_bar);

}  // namespace rtrack
