#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stairbot/common.hpp"

namespace stairbot::signal {

/// One headset sample. Both values are on the 1..100 scale.
struct EegRecord {
  double t = 0.0;
  int attention = 1;
  int meditation = 1;

  bool operator==(const EegRecord&) const = default;
};

/// Incremental parser for the headset serial stream.
///
/// Frame layout: 0xAA 0xAA, length (always 2), attention, meditation, then a
/// checksum equal to the low byte of the payload sum. Bytes may arrive in
/// arbitrary chunks. Frames with a bad length or checksum are dropped and the
/// parser hunts for the next sync pair. Records are stamped with
/// `index * sample_period`.
class EegFrameParser {
 public:
  static constexpr std::uint8_t kSync = 0xAA;
  static constexpr std::uint8_t kPayloadLength = 2;

  explicit EegFrameParser(double sample_period = 1.0) : period_(sample_period) {}

  std::vector<EegRecord> feed(std::span<const std::uint8_t> bytes);

  std::size_t checksum_errors() const { return checksum_errors_; }
  std::size_t length_errors() const { return length_errors_; }
  std::size_t records_emitted() const { return emitted_; }

  static std::vector<std::uint8_t> encode(int attention, int meditation);

 private:
  enum class State { SyncA, SyncB, Length, Payload, Checksum };

  State state_ = State::SyncA;
  std::uint8_t payload_[kPayloadLength] = {0, 0};
  std::size_t payload_pos_ = 0;
  double period_;
  std::size_t checksum_errors_ = 0;
  std::size_t length_errors_ = 0;
  std::size_t emitted_ = 0;
};

struct Sample {
  double t;
  double value;
};

struct LoessConfig {
  double span = 0.3;  // fraction of the series in each local window
  int degree = 1;     // only local-linear fits are supported

  void validate() const;
  /// Points per local window for a series of length n (at least degree + 2).
  std::size_t window_size(std::size_t n) const;
};

/// Locally weighted linear regression with tricube weights, evaluated at each
/// input time. The serial kernel; see kernels.hpp for the OpenMP variant.
/// Throws TooFewPointsError for fewer than degree + 2 points.
std::vector<Sample> loess_smooth(std::span<const Sample> series, const LoessConfig& cfg);

/// Fit at a single index, with the window chosen as the `window` nearest
/// neighbours in time (ties resolved toward earlier samples).
double loess_point(std::span<const Sample> series, std::size_t index, std::size_t window);

enum class PostureState { Holding, Raising, Lowering };
const char* to_string(PostureState s);

struct PostureConfig {
  double raise_threshold = 60.0;
  double lower_threshold = 40.0;
  double rate = 1.0;  // normalized actuator rate magnitude
};

struct PostureOutput {
  PostureState state;
  double rate;
};

/// Hysteresis on the smoothed meditation value: at or above the upper
/// threshold the seat rises, at or below the lower it descends, in between
/// the previous state is kept.
PostureOutput posture_controller(double smoothed_meditation, PostureState previous,
                                 const PostureConfig& cfg = {});

}  // namespace stairbot::signal
