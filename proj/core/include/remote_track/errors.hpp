#pragma once

#include <stdexcept>
#include <string>

namespace rtrack {

/// Base class for every error raised by the library.
struct SimError : std::runtime_error {
  explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An integration step or a field evaluation produced NaN/inf, or the
/// closed loop crossed its divergence ceiling.
struct NonFiniteState : SimError {
  explicit NonFiniteState(const std::string& msg) : SimError(msg) {}
};

/// A time span or jump period is not an integer multiple of the step size.
struct StepMisaligned : SimError {
  explicit StepMisaligned(const std::string& msg) : SimError(msg) {}
};

/// Two jump schedules fire at the same instant without a declared order.
struct ScheduleConflict : SimError {
  explicit ScheduleConflict(const std::string& msg) : SimError(msg) {}
};

/// The bit budget admits no usable quantizer (N < 2).
struct BudgetTooSmall : SimError {
  explicit BudgetTooSmall(const std::string& msg) : SimError(msg) {}
};

/// A symbol vector arrived with a sample index the decoder did not expect.
struct FrameIndexMismatch : SimError {
  explicit FrameIndexMismatch(const std::string& msg) : SimError(msg) {}
};

/// A channel frame has the wrong payload length or an out-of-range symbol.
struct MalformedFrame : SimError {
  explicit MalformedFrame(const std::string& msg) : SimError(msg) {}
};

/// The characteristic polynomial of the gain design is not Hurwitz.
struct NotHurwitz : SimError {
  explicit NotHurwitz(const std::string& msg) : SimError(msg) {}
};

/// A scenario config failed to parse or validate.
struct ConfigError : SimError {
  explicit ConfigError(const std::string& msg) : SimError(msg) {}
};

}  // namespace rtrack
