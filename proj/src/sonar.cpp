#include "stairbot/perception.hpp"

namespace stairbot::perception {

void SonarTriple::validate() const {
  if (!(max_range > 0)) throw PreconditionError("sonar: max range must be positive");
  if (!(threshold < max_range)) throw PreconditionError("sonar: threshold must be < max range");
  for (double d : {left, front, right}) {
    if (!(d > 0) || d > max_range) {
      throw PreconditionError("sonar: reading outside (0, max_range]");
    }
  }
}

int RegionOccupancy::occupied_count() const {
  int n = 0;
  for (std::uint8_t m = 1; m < 8; ++m) n += occupied(m) ? 1 : 0;
  return n;
}

std::vector<std::uint8_t> RegionOccupancy::occupied_cells() const {
  std::vector<std::uint8_t> out;
  for (std::uint8_t m = 1; m < 8; ++m) {
    if (occupied(m)) out.push_back(m);
  }
  return out;
}

std::string RegionOccupancy::cell_name(std::uint8_t m) {
  std::string s;
  if (m & kLeft) s += 'L';
  if (m & kFront) s += 'F';
  if (m & kRight) s += 'R';
  return s;
}

RegionOccupancy region_map(const SonarTriple& s) {
  std::uint8_t blocked = 0;
  if (s.left <= s.threshold) blocked |= kLeft;
  if (s.front <= s.threshold) blocked |= kFront;
  if (s.right <= s.threshold) blocked |= kRight;
  return RegionOccupancy(blocked);
}

}  // namespace stairbot::perception
