#include "remote_track/regulator.hpp"

#include <cmath>

#include "remote_track/errors.hpp"

namespace rtrack {

bool is_hurwitz(const std::vector<double>& c) {
  const int d = static_cast<int>(c.size());
  if (d == 0) return false;
  // Full coefficient list a0..ad of lambda^d + c0 lambda^{d-1} + ... + c_{d-1}.
  std::vector<double> a(d + 1);
  a[0] = 1.0;
  for (int i = 0; i < d; ++i) a[i + 1] = c[i];
  for (double v : a) {
    if (v <= 0.0) return false;  // necessary condition
  }
  // Routh array: d+1 rows, first column must stay positive.
  std::vector<double> prev, curr;
  for (int i = 0; i <= d; i += 2) prev.push_back(a[i]);
  for (int i = 1; i <= d; i += 2) curr.push_back(a[i]);
  for (int row = 2; row <= d; ++row) {
    if (curr.empty() || curr[0] == 0.0) return false;
    std::vector<double> next(curr.size());
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double p = (i + 1 < prev.size()) ? prev[i + 1] : 0.0;
      const double c2 = (i + 1 < curr.size()) ? curr[i + 1] : 0.0;
      next[i] = p - (prev[0] / curr[0]) * c2;
    }
    while (next.size() > 1 && next.back() == 0.0) next.pop_back();
    if (next[0] <= 0.0) return false;
    prev = std::move(curr);
    curr = std::move(next);
  }
  return !curr.empty() && curr[0] > 0.0;
}

Vec build_gain_vector(const GainSpec& spec) {
  if (!is_hurwitz(spec.c)) {
    throw NotHurwitz("gain polynomial is not Hurwitz");
  }
  const int d = static_cast<int>(spec.c.size());
  Vec g(d);
  for (int i = 1; i <= d; ++i) {
    g[i - 1] = std::pow(spec.kappa, i) * spec.c[d - i];
  }
  return g;
}

ScalarMap build_phi_c(const InternalModelSpec& spec) {
  const Box support = spec.support_box;
  const Box outer = support.inflated(spec.blend_width);
  const double bw = spec.blend_width;
  const ScalarMap phi = spec.phi;
  const int d = spec.d;
  return [support, outer, bw, phi, d](std::span<const double> eta) -> double {
    double beta = 1.0;
    Vec clipped(d);
    for (int i = 0; i < d; ++i) {
      clipped[i] = std::clamp(eta[i], outer.lo[i], outer.hi[i]);
      double axis;
      if (eta[i] >= support.lo[i] && eta[i] <= support.hi[i]) {
        axis = 1.0;
      } else if (eta[i] < outer.lo[i] || eta[i] > outer.hi[i]) {
        axis = 0.0;
      } else if (eta[i] < support.lo[i]) {
        axis = (eta[i] - outer.lo[i]) / bw;
      } else {
        axis = (outer.hi[i] - eta[i]) / bw;
      }
      beta *= axis;
      if (beta == 0.0) return 0.0;
    }
    return beta * phi(clipped);
  };
}

void internal_model_field(std::span<const double> xi, const ScalarMap& phi_c,
                          std::span<double> out) {
  const std::size_t d = xi.size();
  for (std::size_t i = 0; i + 1 < d; ++i) out[i] = xi[i + 1];
  out[d - 1] = -phi_c(xi);
}

RegulatorRhs regulator_rhs(std::span<const double> xi, double e_hat,
                           const GainSpec& gains, const Vec& gain_vector,
                           const ScalarMap& phi_c) {
  const std::size_t d = xi.size();
  RegulatorRhs rhs;
  rhs.xi_dot.resize(d);
  internal_model_field(xi, phi_c, rhs.xi_dot);
  for (std::size_t i = 0; i < d; ++i) {
    rhs.xi_dot[i] -= gain_vector[i] * gains.k * e_hat;
  }
  rhs.u = xi[0] - gains.k * e_hat;
  return rhs;
}

Vec tau_vdp(std::span<const double> w, double eps, double a) {
  return {-w[0], -w[1] - eps * (w[0] - a * w[0] * w[0] * w[0])};
}

}  // namespace rtrack
