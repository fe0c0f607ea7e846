#include "stairbot/signal.hpp"

namespace stairbot::signal {

const char* to_string(PostureState s) {
  switch (s) {
    case PostureState::Holding: return "Holding";
    case PostureState::Raising: return "Raising";
    case PostureState::Lowering: return "Lowering";
  }
  return "?";
}

PostureOutput posture_controller(double smoothed_meditation, PostureState previous,
                                 const PostureConfig& cfg) {
  PostureState next = previous;
  if (smoothed_meditation >= cfg.raise_threshold) {
    next = PostureState::Raising;
  } else if (smoothed_meditation <= cfg.lower_threshold) {
    next = PostureState::Lowering;
  }
  switch (next) {
    case PostureState::Raising: return {next, cfg.rate};
    case PostureState::Lowering: return {next, -cfg.rate};
    case PostureState::Holding: break;
  }
  return {next, 0.0};
}

}  // namespace stairbot::signal
