#include "remote_track/csv.hpp"

#include <cstdio>

namespace rtrack {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* phase_name(Trajectory::Tag tag) {
  switch (tag) {
    case Trajectory::Tag::kPreJump:
      return "pre";
    case Trajectory::Tag::kPostJump:
      return "post";
    default:
      return "flow";
  }
}

}  // namespace

std::string csv_header(const StateLayout& lay) {
  std::string h = "t";
  auto block = [&h](const std::string& base, int count) {
    for (int i = 1; i <= count; ++i) {
      h += "," + base + "_" + std::to_string(i);
    }
  };
  block("w", lay.r);
  block("w_e", lay.r);
  block("w_d", lay.r);
  if (lay.has_second_level) block("w_dprime", lay.r);
  block("z", lay.n);
  h += ",y";
  block("xi", lay.d);
  h += ",u,e,e_hat,dec_err,L,phase";
  return h;
}

void write_run_csv(std::ostream& out, const RunResult& res) {
  out << csv_header(res.layout) << "\n";
  const auto& traj = res.trajectory;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << num(traj.times[i]);
    for (double v : traj.states[i]) out << ',' << num(v);
    out << ',' << num(res.u[i]) << ',' << num(res.e[i]) << ','
        << num(res.e_hat[i]) << ',' << num(res.dec_err[i]) << ','
        << num(res.zoom[i]) << ',' << phase_name(traj.tags[i]) << "\n";
  }
}

void write_frame_log(std::ostream& out, const RunResult& res) {
  for (const auto& rec : res.samples) {
    out << frame_log_line(rec.frame) << "\n";
  }
}

void write_metrics_csv(std::ostream& out, const RunMetrics& m) {
  out << "metric,value\n"
      << "tail_tracking_error," << num(m.tail_tracking_error) << "\n"
      << "tail_decoder_error," << num(m.tail_decoder_error) << "\n"
      << "max_state_norm," << num(m.max_state_norm) << "\n"
      << "l_decay_ratio," << num(m.l_decay_ratio) << "\n"
      << "m_t_estimate," << num(m.m_t) << "\n"
      << "levels," << m.levels << "\n"
      << "l0," << num(m.L0) << "\n"
      << "rate_condition," << (m.rate_ok ? "true" : "false") << "\n"
      << "saturated_samples," << m.saturated_samples << "\n";
}

}  // namespace rtrack
