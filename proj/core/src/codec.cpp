#include "remote_track/codec.hpp"

#include <cmath>
#include <random>

#include "remote_track/errors.hpp"

namespace rtrack {

double compute_L0(const Box& w0_box) {
  double L0 = 0.0;
  for (int i = 0; i < w0_box.dim(); ++i) {
    L0 = std::max(L0, w0_box.hi[i] - w0_box.lo[i]);
  }
  return L0;
}

int symbol_bits(int levels) {
  int bits = 0;
  while ((1 << bits) < levels) ++bits;
  return bits;
}

int derive_levels(int n_bits, int r) {
  // r*ceil(log2 N) <= n_bits  <=>  N <= 2^(n_bits/r)
  const int bits_per_component = n_bits / r;
  if (bits_per_component < 1) {
    throw BudgetTooSmall("bit budget admits no quantizer with N >= 2");
  }
  return 1 << bits_per_component;
}

double default_w_margin(int r, double L0, int levels) {
  return std::sqrt(static_cast<double>(r)) * L0 / (2.0 * levels) + 0.5;
}

bool check_rate_condition(int levels, int r, double m_t) {
  return static_cast<double>(levels) > std::sqrt(static_cast<double>(r)) * m_t;
}

double estimate_expansion(const ExoSpec& spec, double T, int n_pairs,
                          std::uint64_t seed, double h) {
  const Box w = spec.working_region();
  const int r = spec.r;
  std::mt19937_64 rng(seed);
  // Explicit u64 -> [0,1) mapping; uniform_real_distribution is not
  // guaranteed to produce identical streams across standard libraries.
  auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto draw = [&](Vec& out) {
    out.resize(r);
    for (int i = 0; i < r; ++i) out[i] = w.lo[i] + (w.hi[i] - w.lo[i]) * u01();
  };

  double worst = 1.0;
  Vec a, b;
  for (int p = 0; p < n_pairs; ++p) {
    draw(a);
    draw(b);
    const double d0 = euclid_dist(a, b);
    if (d0 == 0.0) continue;
    const Vec af = flow_endpoint(spec.s, a, 0.0, T, h);
    const Vec bf = flow_endpoint(spec.s, b, 0.0, T, h);
    worst = std::max(worst, euclid_dist(af, bf) / d0);
  }
  return std::max(1.0, 1.2 * worst);
}

QuantResult quantize_component(double delta, double L, int levels) {
  const double sign = delta < 0.0 ? -1.0 : 1.0;  // sgn(0) := +1
  const double m = levels * std::abs(delta) / L;
  // Even alphabets have no zero symbol; delta = 0 lands in the first
  // positive cell (consistent with sgn(0) := +1).
  double magnitude = (levels % 2 == 0) ? std::max(std::ceil(m), 1.0) - 0.5
                                       : std::ceil(m - 0.5);
  const double cap = (levels - 1) / 2.0;
  QuantResult q;
  if (magnitude > cap) {
    magnitude = cap;
    q.saturated = true;
  }
  q.symbol = sign * magnitude;
  return q;
}

namespace {

void apply_innovation(CodecState& state, const Vec& symbols,
                      const CodecParams& p) {
  for (int i = 0; i < p.r; ++i) {
    state.w_hat[i] += symbols[i] * state.L / p.levels;
  }
  state.L *= std::sqrt(static_cast<double>(p.r)) * p.m_t / p.levels;
  ++state.k;
}

}  // namespace

SymbolVector encoder_jump(CodecState& state, std::span<const double> w_true,
                          const CodecParams& p) {
  SymbolVector sv;
  sv.k = state.k;
  sv.symbols.resize(p.r);
  for (int i = 0; i < p.r; ++i) {
    const QuantResult q =
        quantize_component(w_true[i] - state.w_hat[i], state.L, p.levels);
    sv.symbols[i] = q.symbol;
    sv.saturated = sv.saturated || q.saturated;
  }
  apply_innovation(state, sv.symbols, p);
  return sv;
}

void decoder_jump(CodecState& state, const SymbolVector& symbols,
                  const CodecParams& p) {
  if (symbols.k != state.k) {
    throw FrameIndexMismatch("symbol sample index " + std::to_string(symbols.k) +
                             " does not match decoder index " +
                             std::to_string(state.k));
  }
  apply_innovation(state, symbols.symbols, p);
}

ChannelFrame pack_frame(const SymbolVector& symbols, int levels) {
  const int bits = symbol_bits(levels);
  const int r = static_cast<int>(symbols.symbols.size());
  ChannelFrame frame;
  frame.k = symbols.k;
  frame.payload.assign((r * bits + 7) / 8, 0);
  int bit_pos = 0;
  for (int i = 0; i < r; ++i) {
    const long index =
        std::lround(symbols.symbols[i] + (levels - 1) / 2.0);
    for (int b = bits - 1; b >= 0; --b, ++bit_pos) {
      if ((index >> b) & 1) {
        frame.payload[bit_pos / 8] |= static_cast<std::uint8_t>(0x80 >> (bit_pos % 8));
      }
    }
  }
  return frame;
}

SymbolVector unpack_frame(const ChannelFrame& frame, int levels, int r) {
  const int bits = symbol_bits(levels);
  const std::size_t expected = (r * bits + 7) / 8;
  if (frame.payload.size() != expected) {
    throw MalformedFrame("payload of " + std::to_string(frame.payload.size()) +
                         " octets, expected " + std::to_string(expected));
  }
  SymbolVector sv;
  sv.k = frame.k;
  sv.symbols.resize(r);
  int bit_pos = 0;
  for (int i = 0; i < r; ++i) {
    long index = 0;
    for (int b = 0; b < bits; ++b, ++bit_pos) {
      index = (index << 1) |
              ((frame.payload[bit_pos / 8] >> (7 - bit_pos % 8)) & 1);
    }
    if (index >= levels) {
      throw MalformedFrame("symbol index " + std::to_string(index) +
                           " out of range for N = " + std::to_string(levels));
    }
    sv.symbols[i] = static_cast<double>(index) - (levels - 1) / 2.0;
  }
  return sv;
}

std::string frame_log_line(const ChannelFrame& frame) {
  static const char* hex = "0123456789abcdef";
  std::string line = "k=" + std::to_string(frame.k) + " bits=";
  for (std::uint8_t byte : frame.payload) {
    line += hex[byte >> 4];
    line += hex[byte & 0xf];
  }
  return line;
}

}  // namespace rtrack
