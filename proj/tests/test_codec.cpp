#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "remote_track/codec.hpp"
#include "remote_track/errors.hpp"
#include "remote_track/vanderpol.hpp"

using namespace rtrack;

namespace {

ExoSpec trivial_exo(const VectorField& field, const Box& box, double margin) {
  ExoSpec spec;
  spec.r = field.dimension;
  spec.s = field;
  spec.y_r = [](std::span<const double> w) { return w[w.size() - 1]; };
  spec.w0_box = box;
  spec.w_margin = margin;
  return spec;
}

}  // namespace

TEST_CASE("L0 is the largest box side") {
  CHECK(compute_L0(Box{{-3.0, -3.0}, {3.0, 3.0}}) == 6.0);
  CHECK(compute_L0(Box{{-1.0, 0.0}, {2.0, 5.0}}) == 5.0);
}

TEST_CASE("level derivation from the bit budget") {
  CHECK(derive_levels(2, 2) == 2);
  CHECK(derive_levels(4, 2) == 4);
  CHECK(derive_levels(7, 2) == 8);
  CHECK(derive_levels(3, 1) == 8);
  CHECK_THROWS_AS(derive_levels(1, 2), BudgetTooSmall);
  CHECK_THROWS_AS(derive_levels(0, 1), BudgetTooSmall);
}

TEST_CASE("bits per symbol") {
  CHECK(symbol_bits(2) == 1);
  CHECK(symbol_bits(3) == 2);
  CHECK(symbol_bits(4) == 2);
  CHECK(symbol_bits(8) == 3);
}

TEST_CASE("quantizer single-component examples") {
  CHECK(quantize_component(0.3, 1.0, 2).symbol == 0.5);
  CHECK_FALSE(quantize_component(0.3, 1.0, 2).saturated);
  CHECK(quantize_component(-0.5, 1.0, 2).symbol == -0.5);
  // sgn(0) := +1
  CHECK(quantize_component(0.0, 1.0, 2).symbol == 0.5);
  // Out-of-range inputs clamp and flag saturation.
  const QuantResult sat = quantize_component(0.9, 1.0, 2);
  CHECK(sat.symbol == 0.5);
  CHECK(sat.saturated);
  // Odd alphabet has a zero symbol.
  CHECK(quantize_component(0.1, 1.0, 3).symbol == 0.0);
  CHECK(quantize_component(0.3, 1.0, 3).symbol == 1.0);
  CHECK(quantize_component(-0.3, 1.0, 3).symbol == -1.0);
}

TEST_CASE("dead-beat bound over a dense input grid") {
  for (int levels : {2, 3, 4, 8}) {
    for (double L : {0.5, 1.0, 6.0}) {
      const double bound = L / (2.0 * levels) + 1e-12;
      for (int i = 0; i <= 10000; ++i) {
        const double delta = -L / 2.0 + L * i / 10000.0;
        const QuantResult q = quantize_component(delta, L, levels);
        CAPTURE(levels);
        CAPTURE(L);
        CAPTURE(delta);
        CHECK_FALSE(q.saturated);
        CHECK(std::abs(delta - q.symbol * L / levels) <= bound);
      }
    }
  }
}

TEST_CASE("zoom length follows the contraction law exactly") {
  CodecParams p;
  p.r = 2;
  p.levels = 4;
  p.m_t = 1.3;
  p.L0 = 6.0;
  CodecState st{{0.0, 0.0}, p.L0, 0};
  const double ratio = std::sqrt(2.0) * p.m_t / p.levels;
  const Vec w = {0.7, -0.2};
  for (int k = 1; k <= 100; ++k) {
    encoder_jump(st, w, p);
    const double expect = p.L0 * std::pow(ratio, k);
    CHECK(std::abs(st.L - expect) <= 1e-12 * expect);
  }
}

TEST_CASE("encoder estimate converges dead-beat onto a frozen target") {
  CodecParams p;
  p.r = 2;
  p.levels = 4;
  p.m_t = 1.0;  // static target: no inter-sample drift
  p.L0 = 6.0;
  CodecState st{{0.0, 0.0}, p.L0, 0};
  const Vec w = {1.0, -2.3};
  double L = p.L0;
  for (int k = 0; k < 40; ++k) {
    encoder_jump(st, w, p);
    L *= std::sqrt(2.0) * p.m_t / p.levels;
    CHECK(std::abs(st.w_hat[0] - w[0]) <= std::sqrt(2.0) * L / 2.0 + 1e-15);
    CHECK(std::abs(st.w_hat[1] - w[1]) <= std::sqrt(2.0) * L / 2.0 + 1e-15);
  }
  CHECK(std::abs(st.w_hat[0] - w[0]) < 1e-9);
}

TEST_CASE("expansion estimate of rigid flows is the bare safety factor") {
  VectorField zero;
  zero.dimension = 2;
  zero.eval = [](std::span<const double>, std::span<double> dx) {
    dx[0] = dx[1] = 0.0;
  };
  const Box box{{-1.0, -1.0}, {1.0, 1.0}};
  CHECK(estimate_expansion(trivial_exo(zero, box, 0.0), 0.5, 500, 1) ==
        doctest::Approx(1.2).epsilon(1e-12));

  VectorField rot;
  rot.dimension = 2;
  rot.eval = [](std::span<const double> x, std::span<double> dx) {
    dx[0] = x[1];
    dx[1] = -x[0];
  };
  CHECK(estimate_expansion(trivial_exo(rot, box, 0.0), 0.5, 500, 1) ==
        doctest::Approx(1.2).epsilon(1e-9));
}

TEST_CASE("expansion estimate is seed-deterministic") {
  const Box box{{-3.0, -3.0}, {3.0, 3.0}};
  const ExoSpec exo = trivial_exo(vdp_field(1.5, 1.0), box, 1.0);
  const double a = estimate_expansion(exo, 0.15, 300, 42);
  const double b = estimate_expansion(exo, 0.15, 300, 42);
  CHECK(a == b);
  CHECK(a >= 1.0);
}

TEST_CASE("scenario-1 rate condition holds for the van der pol flow") {
  const Box box{{-3.0, -3.0}, {3.0, 3.0}};
  ExoSpec exo = trivial_exo(vdp_field(1.5, 1.0), box, 0.0);
  exo.w_margin = default_w_margin(2, 6.0, 2);
  const double m_t = estimate_expansion(exo, 0.15, 2000, 1);
  CHECK(check_rate_condition(2, 2, m_t));
  CHECK_FALSE(check_rate_condition(2, 2, std::sqrt(2.0)));
}

TEST_CASE("frame packing examples") {
  SymbolVector sv;
  sv.k = 3;
  sv.symbols = {0.5, -0.5};
  const ChannelFrame f2 = pack_frame(sv, 2);
  REQUIRE(f2.payload.size() == 1);
  CHECK(f2.payload[0] == 0x80);
  CHECK(frame_log_line(f2) == "k=3 bits=80");

  sv.symbols = {-1.5, 1.5};
  const ChannelFrame f4 = pack_frame(sv, 4);
  REQUIRE(f4.payload.size() == 1);
  CHECK(f4.payload[0] == 0x30);

  const SymbolVector back = unpack_frame(f4, 4, 2);
  CHECK(back.k == 3);
  CHECK(back.symbols == Vec{-1.5, 1.5});
}

TEST_CASE("pack/unpack round-trips every symbol combination") {
  for (int levels : {2, 3, 4, 8}) {
    for (int r : {1, 2, 3}) {
      long combos = 1;
      for (int i = 0; i < r; ++i) combos *= levels;
      for (long c = 0; c < combos; ++c) {
        SymbolVector sv;
        sv.k = c;
        long rest = c;
        for (int i = 0; i < r; ++i) {
          sv.symbols.push_back(static_cast<double>(rest % levels) -
                               (levels - 1) / 2.0);
          rest /= levels;
        }
        const SymbolVector back =
            unpack_frame(pack_frame(sv, levels), levels, r);
        CHECK(back.symbols == sv.symbols);
        CHECK(back.k == sv.k);
      }
    }
  }
}

TEST_CASE("malformed frames are rejected") {
  ChannelFrame f;
  f.k = 0;
  f.payload = {0x00, 0x00};
  CHECK_THROWS_AS(unpack_frame(f, 2, 2), MalformedFrame);  // wrong length
  f.payload = {0xC0};  // index 3 in a 2-bit field, but N = 3
  CHECK_THROWS_AS(unpack_frame(f, 3, 1), MalformedFrame);
}

TEST_CASE("decoder refuses out-of-order frames") {
  CodecParams p;
  p.r = 1;
  p.levels = 2;
  p.m_t = 1.0;
  p.L0 = 1.0;
  CodecState st{{0.0}, 1.0, 0};
  SymbolVector sv;
  sv.k = 5;
  sv.symbols = {0.5};
  CHECK_THROWS_AS(decoder_jump(st, sv, p), FrameIndexMismatch);
  sv.k = 0;
  CHECK_NOTHROW(decoder_jump(st, sv, p));
}
