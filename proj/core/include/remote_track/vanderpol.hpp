#pragma once

#include "remote_track/closedloop.hpp"
#include "remote_track/integrator.hpp"
#include "remote_track/regulator.hpp"
#include "remote_track/types.hpp"

namespace rtrack {

/// Van der Pol oscillator in Lienard form:
///   w1' = w2 + eps*(w1 - a*w1^3),  w2' = -w1.
VectorField vdp_field(double eps, double a);

/// Reference output y_r(w) = w2.
double vdp_reference(std::span<const double> w);

/// Immersion nonlinearity for u_ss = -w1 under the field above:
///   phi(xi) = xi1 - eps*(xi2 - 3*a*xi1^2*xi2),
/// so that u'' + phi(u, u') = 0 along the exosystem flow.
ScalarMap vdp_phi(double eps, double a);

/// Support box for phi_c: tau-image of 100 s exosystem runs from the four
/// corners of w0_box, bounding box scaled by `inflation` about its center.
Box vdp_support_box(double eps, double a, const Box& w0_box, double inflation,
                    double h = 1e-3, double horizon = 100.0);

/// The two built-in scenarios: 1-bit channel at T = 0.15 s, 2-bit channel
/// at T = 0.5 s.
Scenario make_scenario1();
Scenario make_scenario2();

/// The same scenarios as shipped config documents.
extern const char* const kScenario1Config;
extern const char* const kScenario2Config;

}  // namespace rtrack
