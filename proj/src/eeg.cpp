#include <algorithm>

#include "stairbot/signal.hpp"

namespace stairbot::signal {

std::vector<EegRecord> EegFrameParser::feed(std::span<const std::uint8_t> bytes) {
  std::vector<EegRecord> out;
  for (std::uint8_t byte : bytes) {
    switch (state_) {
      case State::SyncA:
        if (byte == kSync) state_ = State::SyncB;
        break;
      case State::SyncB:
        state_ = byte == kSync ? State::Length : State::SyncA;
        break;
      case State::Length:
        if (byte == kSync) break;  // extra sync bytes are allowed
        if (byte != kPayloadLength) {
          ++length_errors_;
          state_ = State::SyncA;
          break;
        }
        payload_pos_ = 0;
        state_ = State::Payload;
        break;
      case State::Payload:
        payload_[payload_pos_++] = byte;
        if (payload_pos_ == kPayloadLength) state_ = State::Checksum;
        break;
      case State::Checksum: {
        const auto sum = static_cast<std::uint8_t>(payload_[0] + payload_[1]);
        state_ = State::SyncA;
        if (sum != byte) {
          ++checksum_errors_;
          break;
        }
        EegRecord rec;
        rec.t = static_cast<double>(emitted_) * period_;
        rec.attention = std::clamp<int>(payload_[0], 1, 100);
        rec.meditation = std::clamp<int>(payload_[1], 1, 100);
        out.push_back(rec);
        ++emitted_;
        break;
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> EegFrameParser::encode(int attention, int meditation) {
  const auto a = static_cast<std::uint8_t>(std::clamp(attention, 0, 255));
  const auto m = static_cast<std::uint8_t>(std::clamp(meditation, 0, 255));
  return {kSync, kSync, kPayloadLength, a, m, static_cast<std::uint8_t>(a + m)};
}

}  // namespace stairbot::signal
