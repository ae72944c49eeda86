#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "remote_track/integrator.hpp"
#include "remote_track/types.hpp"

namespace rtrack {

/// The remote reference generator and its admissible initial conditions.
struct ExoSpec {
  int r = 0;
  VectorField s;
  std::function<double(std::span<const double>)> y_r;
  Box w0_box;
  double w_margin = 0.0;

  /// The invariant working region W: w0_box inflated by w_margin.
  Box working_region() const { return w0_box.inflated(w_margin); }
};

/// Largest side length of the box (max coordinate difference over pairs).
double compute_L0(const Box& w0_box);

/// Largest N with r*ceil(log2 N) <= n_bits. Throws BudgetTooSmall if N < 2.
int derive_levels(int n_bits, int r);

/// Bits needed per quantizer symbol.
int symbol_bits(int levels);

/// Default inflation radius for W: sqrt(r)*L0/(2N) + 0.5.
double default_w_margin(int r, double L0, int levels);

/// Monte Carlo over-approximation of the one-horizon expansion factor:
/// max over sampled pairs in W of |w1(T) - w2(T)| / |w10 - w20|, times a
/// 1.2 safety factor, floored at 1. Deterministic for a fixed seed.
double estimate_expansion(const ExoSpec& spec, double T, int n_pairs,
                          std::uint64_t seed, double h = 1e-3);

/// Zoom contraction test: N > sqrt(r) * M_T, strictly.
bool check_rate_condition(int levels, int r, double m_t);

struct QuantResult {
  double symbol = 0.0;
  bool saturated = false;
};

/// One-component zooming quantizer. sgn(0) := +1; the result is clamped to
/// magnitude (N-1)/2 with the saturation flag raised if clamping changed it.
QuantResult quantize_component(double delta, double L, int levels);

struct CodecParams {
  int r = 0;
  int levels = 0;
  double m_t = 1.0;
  double L0 = 0.0;
};

/// Encoder- or decoder-side state (w_e / w_d plus the zoom length).
struct CodecState {
  Vec w_hat;
  double L = 0.0;
  long k = 0;
};

struct SymbolVector {
  Vec symbols;
  long k = 0;
  bool saturated = false;
};

/// Quantizes w_true - w_hat, applies the innovation, contracts the zoom
/// length, advances the sample index. Returns the symbols for transmission.
SymbolVector encoder_jump(CodecState& state, std::span<const double> w_true,
                          const CodecParams& p);

/// Applies the received symbols with the identical update law. Throws
/// FrameIndexMismatch if the sample indices disagree.
void decoder_jump(CodecState& state, const SymbolVector& symbols,
                  const CodecParams& p);

/// One sample's payload: r symbols, ceil(log2 N) bits each, MSB-first,
/// zero-padded to whole octets.
struct ChannelFrame {
  std::vector<std::uint8_t> payload;
  long k = 0;
};

ChannelFrame pack_frame(const SymbolVector& symbols, int levels);

/// Inverts pack_frame exactly. Throws MalformedFrame on a wrong payload
/// length or an out-of-range symbol index.
SymbolVector unpack_frame(const ChannelFrame& frame, int levels, int r);

/// Run-log line: `k=<int> bits=<hex>`.
std::string frame_log_line(const ChannelFrame& frame);

}  // namespace rtrack
