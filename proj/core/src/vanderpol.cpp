#include "remote_track/vanderpol.hpp"

#include <algorithm>

#include "remote_track/config.hpp"

namespace rtrack {

VectorField vdp_field(double eps, double a) {
  VectorField f;
  f.dimension = 2;
  f.eval = [eps, a](std::span<const double> w, std::span<double> dw) {
    dw[0] = w[1] + eps * (w[0] - a * w[0] * w[0] * w[0]);
    dw[1] = -w[0];
  };
  return f;
}

double vdp_reference(std::span<const double> w) { return w[1]; }

ScalarMap vdp_phi(double eps, double a) {
  return [eps, a](std::span<const double> xi) {
    return xi[0] - eps * (xi[1] - 3.0 * a * xi[0] * xi[0] * xi[1]);
  };
}

Box vdp_support_box(double eps, double a, const Box& w0_box, double inflation,
                    double h, double horizon) {
  const VectorField field = vdp_field(eps, a);
  Box bbox{{0.0, 0.0}, {0.0, 0.0}};
  bool first = true;
  for (int corner = 0; corner < 4; ++corner) {
    const Vec w0 = {corner & 1 ? w0_box.hi[0] : w0_box.lo[0],
                    corner & 2 ? w0_box.hi[1] : w0_box.lo[1]};
    const Trajectory traj = integrate_flow(field, w0, 0.0, horizon, h);
    for (const Vec& w : traj.states) {
      const Vec tau = tau_vdp(w, eps, a);
      for (int i = 0; i < 2; ++i) {
        if (first) {
          bbox.lo[i] = bbox.hi[i] = tau[i];
        } else {
          bbox.lo[i] = std::min(bbox.lo[i], tau[i]);
          bbox.hi[i] = std::max(bbox.hi[i], tau[i]);
        }
      }
      first = false;
    }
  }
  return bbox.scaled(inflation);
}

const char* const kScenario1Config = R"cfg(# Built-in scenario 1: 1-bit-per-component channel, T = 0.15 s.
[exosystem]
type = vanderpol
epsilon = 1.5
a = 1.0
w0_min = -3 -3
w0_max = 3 3
w_margin = auto

[channel]
bits_per_sample = 2
sampling_interval = 0.15
expansion_pairs = 2000
expansion_seed = 1

[plant]
type = integrator
y_init = 5

[internal_model]
blend_width = 0.5
support_inflation = 1.25

[gains]
kappa = 3
hurwitz_c = 4 4
k = 8

[simulation]
t_end = 30
step = 0.001
t_tail = 25
w_init = 1 0
codec_init = 0 0
xi_init = 0 0
state_ceiling = 1000

[thresholds]
tracking_tail = 0.05
decoder_tail = 0.02
)cfg";

const char* const kScenario2Config = R"cfg(# Built-in scenario 2: 2-bit-per-component channel, T = 0.5 s.
[exosystem]
type = vanderpol
epsilon = 1.5
a = 1.0
w0_min = -3 -3
w0_max = 3 3
w_margin = auto

[channel]
bits_per_sample = 4
sampling_interval = 0.5
expansion_pairs = 2000
expansion_seed = 1

[plant]
type = integrator
y_init = 5

[internal_model]
blend_width = 0.5
support_inflation = 1.25

[gains]
kappa = 3
hurwitz_c = 4 4
k = 8

[simulation]
t_end = 30
step = 0.001
t_tail = 25
w_init = 1 0
codec_init = 0 0
xi_init = 0 0
state_ceiling = 1000

[thresholds]
tracking_tail = 0.05
decoder_tail = 0.02
)cfg";

Scenario make_scenario1() {
  return build_scenario(parse_config(kScenario1Config, "scenario1"));
}

Scenario make_scenario2() {
  return build_scenario(parse_config(kScenario2Config, "scenario2"));
}

}  // namespace rtrack
