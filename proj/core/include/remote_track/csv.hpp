#pragma once

#include <ostream>
#include <string>

#include "remote_track/closedloop.hpp"

namespace rtrack {

/// Fixed column set for a given layout: t, w_1..w_r, w_e_*, w_d_*,
/// w_dprime_* (if present), z_*, y, xi_*, u, e, e_hat, dec_err, L, phase.
std::string csv_header(const StateLayout& layout);

/// One row per recorded time; jump rows appear twice with phase pre/post.
void write_run_csv(std::ostream& out, const RunResult& res);

/// One `k=<int> bits=<hex>` line per transmitted frame.
void write_frame_log(std::ostream& out, const RunResult& res);

/// key,value metric rows.
void write_metrics_csv(std::ostream& out, const RunMetrics& m);

}  // namespace rtrack
