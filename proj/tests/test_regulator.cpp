#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "remote_track/errors.hpp"
#include "remote_track/integrator.hpp"
#include "remote_track/regulator.hpp"
#include "remote_track/vanderpol.hpp"

using namespace rtrack;

namespace {

InternalModelSpec vdp_im(double blend = 0.5) {
  InternalModelSpec im;
  im.d = 2;
  im.phi = vdp_phi(1.5, 1.0);
  im.support_box = Box{{-10.0, -10.0}, {10.0, 10.0}};
  im.blend_width = blend;
  return im;
}

}  // namespace

TEST_CASE("routh test on low-degree polynomials") {
  CHECK(is_hurwitz({4.0, 4.0}));
  CHECK(is_hurwitz({2.0, 1.0}));
  CHECK(is_hurwitz({6.0, 11.0, 6.0}));  // (s+1)(s+2)(s+3)
  CHECK_FALSE(is_hurwitz({0.0, 1.0}));
  CHECK_FALSE(is_hurwitz({1.0, 1.0, 1.0}));  // Routh first column fails
  CHECK_FALSE(is_hurwitz({-1.0, 2.0}));
}

TEST_CASE("gain vector from the hurwitz coefficients") {
  CHECK(build_gain_vector({3.0, {4.0, 4.0}, 8.0}) == Vec{12.0, 36.0});
  CHECK(build_gain_vector({1.0, {1.0, 2.0}, 1.0}) == Vec{2.0, 1.0});
  CHECK_THROWS_AS(build_gain_vector({2.0, {0.0, 1.0}, 1.0}), NotHurwitz);
}

TEST_CASE("phi_c equals phi on the support box and vanishes beyond it") {
  const InternalModelSpec im = vdp_im();
  const ScalarMap phi_c = build_phi_c(im);
  const Vec inside = {1.0, 2.0};
  CHECK(phi_c(inside) == im.phi(inside));
  const Vec corner = {10.0, -10.0};
  CHECK(phi_c(corner) == im.phi(corner));
  CHECK(phi_c(Vec{11.0, 0.0}) == 0.0);
  CHECK(phi_c(Vec{0.0, -10.6}) == 0.0);
}

TEST_CASE("phi_c increments stay Lipschitz across the blend layer") {
  const ScalarMap phi_c = build_phi_c(vdp_im());
  // March through the blend region along the first axis; the bump is
  // piecewise linear, so increments are bounded by (local slope) * step.
  double prev = phi_c(Vec{9.5, 3.0});
  for (int i = 1; i <= 200; ++i) {
    const double x = 9.5 + 1.2 * i / 200.0;
    const double cur = phi_c(Vec{x, 3.0});
    CHECK(std::abs(cur - prev) < 30.0);
    prev = cur;
  }
  CHECK(prev == 0.0);
}

TEST_CASE("internal model field in observer form") {
  const ScalarMap phi_c = build_phi_c(vdp_im());
  Vec out(2);
  internal_model_field(Vec{1.0, 2.0}, phi_c, out);
  // phi(1, 2) = 1 - 1.5*(2 - 3*2) = 7
  CHECK(out[0] == 2.0);
  CHECK(out[1] == -7.0);
  internal_model_field(Vec{0.0, 0.0}, phi_c, out);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
}

TEST_CASE("tau maps the exosystem flow onto the model chain") {
  // Along w(t), xi(t) = tau(w(t)) must satisfy xi1' = xi2 and
  // xi2' = -phi(xi); verify by central differences on a fine grid.
  const double eps = 1.5, a = 1.0;
  const VectorField f = vdp_field(eps, a);
  const ScalarMap phi = vdp_phi(eps, a);
  const Trajectory traj = integrate_flow(f, {1.0, 0.0}, 0.0, 8.0, 1e-3);
  const double h = 1e-3;
  for (std::size_t i = 1; i + 1 < traj.size(); i += 37) {
    const Vec xm = tau_vdp(traj.states[i - 1], eps, a);
    const Vec x0 = tau_vdp(traj.states[i], eps, a);
    const Vec xp = tau_vdp(traj.states[i + 1], eps, a);
    const double d1 = (xp[0] - xm[0]) / (2.0 * h);
    const double d2 = (xp[1] - xm[1]) / (2.0 * h);
    CHECK(std::abs(d1 - x0[1]) < 1e-3);
    CHECK(std::abs(d2 + phi(x0)) < 1e-3);
  }
}

TEST_CASE("tau at the reference initial condition") {
  CHECK(tau_vdp(Vec{1.0, 0.0}, 1.5, 1.0) == Vec{-1.0, 0.0});
  CHECK(tau_vdp(Vec{0.0, 1.0}, 1.5, 1.0) == Vec{0.0, -1.0});
}

TEST_CASE("regulator right-hand side at the origin") {
  const GainSpec gains{3.0, {4.0, 4.0}, 8.0};
  const Vec G = build_gain_vector(gains);
  const ScalarMap phi_c = build_phi_c(vdp_im());
  const RegulatorRhs rhs = regulator_rhs(Vec{0.0, 0.0}, 1.0, gains, G, phi_c);
  CHECK(rhs.xi_dot == Vec{-96.0, -288.0});
  CHECK(rhs.u == -8.0);
}

TEST_CASE("regulator is affine in the innovation") {
  const GainSpec gains{2.0, {3.0, 5.0}, 4.0};
  const Vec G = build_gain_vector(gains);
  const ScalarMap phi_c = build_phi_c(vdp_im());
  const Vec xi = {0.4, -1.1};
  const RegulatorRhs r0 = regulator_rhs(xi, 0.0, gains, G, phi_c);
  const RegulatorRhs r1 = regulator_rhs(xi, 1.0, gains, G, phi_c);
  const RegulatorRhs r3 = regulator_rhs(xi, 3.0, gains, G, phi_c);
  for (int i = 0; i < 2; ++i) {
    const double slope = r1.xi_dot[i] - r0.xi_dot[i];
    CHECK(r3.xi_dot[i] ==
          doctest::Approx(r0.xi_dot[i] + 3.0 * slope).epsilon(1e-12));
  }
  CHECK(r3.u == doctest::Approx(r0.u + 3.0 * (r1.u - r0.u)).epsilon(1e-12));
}

TEST_CASE("support box construction covers the immersed cycle") {
  const Box w0{{-3.0, -3.0}, {3.0, 3.0}};
  const Box support = vdp_support_box(1.5, 1.0, w0, 1.25, 1e-2, 50.0);
  // The cycle passes through tau((1,0)) = (-1, 0) and its mirror.
  CHECK(support.contains(Vec{-1.0, 0.0}, 0.0));
  CHECK(support.contains(Vec{1.0, 0.0}, 0.0));
  CHECK(support.lo[0] < -1.0);
  CHECK(support.hi[0] > 1.0);
}
