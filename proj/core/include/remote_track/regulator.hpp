#pragma once

#include <functional>
#include <vector>

#include "remote_track/types.hpp"

namespace rtrack {

using ScalarMap = std::function<double(std::span<const double>)>;

/// High-gain observer parameter, Hurwitz coefficients c_0..c_{d-1} of
/// lambda^d + c_0 lambda^{d-1} + ... + c_{d-1}, and the error-injection
/// gain k.
struct GainSpec {
  double kappa = 1.0;
  std::vector<double> c;
  double k = 1.0;
};

/// Routh test for lambda^d + c[0] lambda^{d-1} + ... + c[d-1].
bool is_hurwitz(const std::vector<double>& c);

/// G_i = kappa^i * c_{d-i}, i = 1..d. Throws NotHurwitz.
Vec build_gain_vector(const GainSpec& spec);

/// Immersion nonlinearity with the compact support box it is kept exact on.
struct InternalModelSpec {
  int d = 0;
  ScalarMap phi;
  Box support_box;
  double blend_width = 0.5;
};

/// eta |-> beta(eta) * phi(clip(eta)): equals phi on the support box,
/// vanishes outside the box inflated by blend_width, globally Lipschitz
/// (piecewise-linear bump, product over axes).
ScalarMap build_phi_c(const InternalModelSpec& spec);

/// Observer-form chain: (xi_2, ..., xi_d, -phi_c(xi)).
void internal_model_field(std::span<const double> xi, const ScalarMap& phi_c,
                          std::span<double> out);

struct RegulatorRhs {
  Vec xi_dot;
  double u = 0.0;
};

/// xi_dot = Phi_c(xi) - G*k*e_hat;  u = xi_1 - k*e_hat.
RegulatorRhs regulator_rhs(std::span<const double> xi, double e_hat,
                           const GainSpec& gains, const Vec& gain_vector,
                           const ScalarMap& phi_c);

/// Immersion map for the Van der Pol scenario:
/// tau(w) = (-w1, -w2 - eps*(w1 - a*w1^3)); the second component is the
/// time derivative of the first along the exosystem flow.
Vec tau_vdp(std::span<const double> w, double eps, double a);

}  // namespace rtrack
