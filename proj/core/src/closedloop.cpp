#include "remote_track/closedloop.hpp"

#include <cmath>
#include <memory>

#include "remote_track/errors.hpp"

namespace rtrack {

ChannelSetup prepare_channel(const Scenario& sc) {
  ChannelSetup ch;
  ch.L0 = compute_L0(sc.exo.w0_box);
  ch.levels = sc.levels_override ? *sc.levels_override
                                 : derive_levels(sc.n_bits, sc.exo.r);
  ch.margin = sc.auto_margin ? default_w_margin(sc.exo.r, ch.L0, ch.levels)
                             : sc.exo.w_margin;
  ExoSpec exo = sc.exo;
  exo.w_margin = ch.margin;
  ch.working_region = exo.working_region();
  ch.m_t = sc.m_t_override
               ? *sc.m_t_override
               : estimate_expansion(exo, sc.T, sc.expansion_pairs,
                                    sc.expansion_seed, sc.h);
  ch.rate_ok = check_rate_condition(ch.levels, sc.exo.r, ch.m_t);
  return ch;
}

StateLayout StateLayout::make(int r, int n, int d, bool second_level) {
  StateLayout lay;
  lay.r = r;
  lay.n = n;
  lay.d = d;
  lay.has_second_level = second_level;
  int off = 0;
  lay.w = off;
  off += r;
  lay.w_e = off;
  off += r;
  lay.w_d = off;
  off += r;
  if (second_level) {
    lay.w_dp = off;
    off += r;
  }
  lay.z = off;
  off += n;
  lay.y = off;
  off += 1;
  lay.xi = off;
  off += d;
  lay.total = off;
  return lay;
}

namespace {

void validate_scenario(const Scenario& sc) {
  const int r = sc.exo.r;
  if (r <= 0 || sc.exo.w0_box.dim() != r) {
    throw ConfigError("exosystem dimension/box mismatch");
  }
  if (static_cast<int>(sc.w_init.size()) != r ||
      static_cast<int>(sc.codec_init.size()) != r) {
    throw ConfigError("initial state dimension mismatch");
  }
  if (!sc.exo.w0_box.contains(sc.w_init, 1e-12) ||
      !sc.exo.w0_box.contains(sc.codec_init, 1e-12)) {
    throw ConfigError("initial conditions must lie in W0");
  }
  if (sc.T <= 0.0 || sc.h <= 0.0 || sc.t_end <= 0.0) {
    throw ConfigError("T, h and t_end must be positive");
  }
  if (static_cast<int>(sc.xi_init.size()) != sc.im.d ||
      static_cast<int>(sc.gains.c.size()) != sc.im.d) {
    throw ConfigError("internal-model order mismatch");
  }
  if (static_cast<int>(sc.z_init.size()) != sc.plant.n) {
    throw ConfigError("plant state dimension mismatch");
  }
  if (sc.second_level && (sc.second_level->ell < 1 || sc.second_level->t_bar <= 0.0)) {
    throw ConfigError("second level requires ell >= 1 and t_bar > 0");
  }
}

// Run-local mutable context shared by the jump actions.
struct RunContext {
  CodecState enc;
  CodecState dec;
  CodecParams params;
  double T = 0.0;
  std::vector<SampleRecord> samples;
};

}  // namespace

RunResult run_scenario(const Scenario& sc) {
  validate_scenario(sc);
  const ChannelSetup ch = prepare_channel(sc);
  const int r = sc.exo.r;
  const StateLayout lay =
      StateLayout::make(r, sc.plant.n, sc.im.d, sc.second_level.has_value());

  const ScalarMap phi_c = build_phi_c(sc.im);
  const Vec gain_vec = build_gain_vector(sc.gains);
  const double k_gain = sc.gains.k;
  const auto y_r = sc.exo.y_r;
  const auto exo_eval = sc.exo.s.eval;
  const auto plant_f = sc.plant.f;
  const auto plant_q = sc.plant.q;
  const Vec mu = sc.plant.mu;
  const double ceiling = sc.state_ceiling;
  const int active_off = sc.second_level ? lay.w_dp : lay.w_d;

  VectorField field;
  field.dimension = lay.total;
  field.eval = [=](std::span<const double> x, std::span<double> dx) {
    if (inf_norm(x) > ceiling) {
      throw NonFiniteState("composite state norm exceeded divergence ceiling");
    }
    exo_eval(x.subspan(lay.w, r), dx.subspan(lay.w, r));
    exo_eval(x.subspan(lay.w_e, r), dx.subspan(lay.w_e, r));
    exo_eval(x.subspan(lay.w_d, r), dx.subspan(lay.w_d, r));
    if (lay.has_second_level) {
      exo_eval(x.subspan(lay.w_dp, r), dx.subspan(lay.w_dp, r));
    }
    const double y = x[lay.y];
    const double e_hat = y - y_r(x.subspan(active_off, r));
    const double u = x[lay.xi] - k_gain * e_hat;
    if (lay.n > 0) {
      plant_f(x.subspan(lay.z, lay.n), y, mu, dx.subspan(lay.z, lay.n));
    }
    const double drift =
        plant_q ? plant_q(x.subspan(lay.z, lay.n), y, mu) : 0.0;
    dx[lay.y] = drift + u;
    auto xi = x.subspan(lay.xi, lay.d);
    auto dxi = dx.subspan(lay.xi, lay.d);
    internal_model_field(xi, phi_c, dxi);
    for (int i = 0; i < lay.d; ++i) dxi[i] -= gain_vec[i] * k_gain * e_hat;
  };

  auto ctx = std::make_shared<RunContext>();
  ctx->params = CodecParams{r, ch.levels, ch.m_t, ch.L0};
  ctx->enc = CodecState{sc.codec_init, ch.L0, 0};
  ctx->dec = CodecState{sc.codec_init, ch.L0, 0};
  ctx->T = sc.T;

  std::vector<JumpSchedule> schedules;
  {
    JumpSchedule channel;
    channel.period = sc.T;
    channel.phase = 0.0;
    channel.order = 0;
    channel.action = [ctx, lay, r](const Vec& x) -> Vec {
      Vec out = x;
      SampleRecord rec;
      rec.k = ctx->enc.k;
      rec.t = static_cast<double>(rec.k) * ctx->T;
      rec.L_used = ctx->enc.L;
      // Encoder side: quantize against the flowed w_e, update it.
      std::copy_n(out.begin() + lay.w_e, r, ctx->enc.w_hat.begin());
      rec.symbols = encoder_jump(
          ctx->enc, std::span<const double>(out).subspan(lay.w, r),
          ctx->params);
      std::copy_n(ctx->enc.w_hat.begin(), r, out.begin() + lay.w_e);
      // Lossless channel: frame the symbols and feed them to the decoder.
      rec.frame = pack_frame(rec.symbols, ctx->params.levels);
      std::copy_n(out.begin() + lay.w_d, r, ctx->dec.w_hat.begin());
      decoder_jump(ctx->dec,
                   unpack_frame(rec.frame, ctx->params.levels, ctx->params.r),
                   ctx->params);
      std::copy_n(ctx->dec.w_hat.begin(), r, out.begin() + lay.w_d);
      rec.L_next = ctx->enc.L;
      ctx->samples.push_back(std::move(rec));
      return out;
    };
    schedules.push_back(std::move(channel));
  }
  if (sc.second_level) {
    JumpSchedule copy_down;
    copy_down.period = sc.second_level->ell * sc.second_level->t_bar;
    copy_down.phase = 0.0;
    copy_down.order = 1;
    copy_down.action = [lay, r](const Vec& x) -> Vec {
      Vec out = x;
      std::copy_n(out.begin() + lay.w_d, r, out.begin() + lay.w_dp);
      return out;
    };
    schedules.push_back(std::move(copy_down));
  }

  Vec x0(lay.total, 0.0);
  std::copy(sc.w_init.begin(), sc.w_init.end(), x0.begin() + lay.w);
  std::copy(sc.codec_init.begin(), sc.codec_init.end(), x0.begin() + lay.w_e);
  std::copy(sc.codec_init.begin(), sc.codec_init.end(), x0.begin() + lay.w_d);
  if (lay.has_second_level) {
    std::copy(sc.codec_init.begin(), sc.codec_init.end(),
              x0.begin() + lay.w_dp);
  }
  std::copy(sc.z_init.begin(), sc.z_init.end(), x0.begin() + lay.z);
  x0[lay.y] = sc.y_init;
  std::copy(sc.xi_init.begin(), sc.xi_init.end(), x0.begin() + lay.xi);

  RunResult res;
  res.layout = lay;
  res.channel = ch;
  res.trajectory = run_hybrid(field, x0, schedules, sc.t_end, sc.h);
  res.samples = std::move(ctx->samples);

  // Per-row diagnostics.
  const std::size_t rows = res.trajectory.size();
  res.e.resize(rows);
  res.e_hat.resize(rows);
  res.dec_err.resize(rows);
  res.u.resize(rows);
  res.zoom.resize(rows);
  double current_L = ch.L0;
  std::size_t sample_idx = 0;
  double max_norm = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const Vec& x = res.trajectory.states[i];
    std::span<const double> xs(x);
    const double y = x[lay.y];
    res.e[i] = y - y_r(xs.subspan(lay.w, r));
    const double e_hat = y - y_r(xs.subspan(active_off, r));
    res.e_hat[i] = e_hat;
    res.dec_err[i] = euclid_dist(xs.subspan(lay.w, r), xs.subspan(lay.w_d, r));
    res.u[i] = x[lay.xi] - k_gain * e_hat;
    if (res.trajectory.tags[i] == Trajectory::Tag::kPostJump &&
        sample_idx < res.samples.size() &&
        std::abs(res.trajectory.times[i] - res.samples[sample_idx].t) <
            0.5 * sc.h) {
      current_L = res.samples[sample_idx].L_next;
      ++sample_idx;
    }
    res.zoom[i] = current_L;
    max_norm = std::max(max_norm, inf_norm(xs));
  }

  RunMetrics& m = res.metrics;
  m.tail_tracking_error = tail_sup(res.trajectory.times, res.e, sc.t_tail);
  m.tail_decoder_error = tail_sup(res.trajectory.times, res.dec_err, sc.t_tail);
  m.max_state_norm = max_norm;
  m.l_decay_ratio = std::sqrt(static_cast<double>(r)) * ch.m_t / ch.levels;
  m.m_t = ch.m_t;
  m.levels = ch.levels;
  m.L0 = ch.L0;
  m.rate_ok = ch.rate_ok;
  for (const auto& rec : res.samples) {
    if (rec.symbols.saturated) ++m.saturated_samples;
  }
  return res;
}

std::vector<double> compute_tracking_error(
    const Trajectory& traj, const StateLayout& layout,
    const std::function<double(std::span<const double>)>& y_r) {
  std::vector<double> e(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::span<const double> x(traj.states[i]);
    e[i] = x[layout.y] - y_r(x.subspan(layout.w, layout.r));
  }
  return e;
}

double tail_sup(const std::vector<double>& times, const std::vector<double>& v,
                double t_tail) {
  double sup = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t_tail) sup = std::max(sup, std::abs(v[i]));
  }
  return sup;
}

int check_dwell_compat(double t_star_estimate, double t_bar) {
  if (t_star_estimate <= t_bar) return 1;
  return static_cast<int>(std::ceil(t_star_estimate / t_bar - 1e-12));
}

}  // namespace rtrack
