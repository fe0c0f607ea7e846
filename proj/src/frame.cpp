#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "stairbot/perception.hpp"

namespace stairbot::perception {

Frame::Frame(int width, int height, float fill)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), fill) {
  if (width <= 0 || height <= 0) throw PreconditionError("frame: empty dimensions");
}

float Frame::clamped(int x, int y) const {
  return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
}

double Frame::sample(double x, double y) const {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double ax = x - fx;
  const double ay = y - fy;
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double p00 = clamped(x0, y0);
  const double p10 = clamped(x0 + 1, y0);
  const double p01 = clamped(x0, y0 + 1);
  const double p11 = clamped(x0 + 1, y0 + 1);
  return (1 - ay) * ((1 - ax) * p00 + ax * p10) + ay * ((1 - ax) * p01 + ax * p11);
}

void write_pgm(std::ostream& os, const Frame& f) {
  os << "P5\n" << f.width() << ' ' << f.height() << "\n255\n";
  std::string row(static_cast<std::size_t>(f.width()), '\0');
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      const double v = std::clamp(std::round(static_cast<double>(f.at(x, y))), 0.0, 255.0);
      row[static_cast<std::size_t>(x)] = static_cast<char>(static_cast<unsigned char>(v));
    }
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& is) {
  std::string tok;
  while (is) {
    const int c = is.get();
    if (c == EOF) break;
    if (c == '#') {
      std::string discard;
      std::getline(is, discard);
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

}  // namespace

Frame read_pgm(std::istream& is) {
  if (header_token(is) != "P5") throw PreconditionError("pgm: expected P5 magic");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(header_token(is));
    h = std::stoi(header_token(is));
    maxval = std::stoi(header_token(is));
  } catch (const std::exception&) {
    throw PreconditionError("pgm: malformed header");
  }
  if (w <= 0 || h <= 0 || maxval != 255) {
    throw PreconditionError("pgm: only 8-bit images with positive size are supported");
  }
  Frame f(w, h);
  std::string row(static_cast<std::size_t>(w), '\0');
  for (int y = 0; y < h; ++y) {
    if (!is.read(row.data(), w)) throw PreconditionError("pgm: truncated pixel data");
    for (int x = 0; x < w; ++x) {
      f.at(x, y) = static_cast<float>(static_cast<unsigned char>(row[static_cast<std::size_t>(x)]));
    }
  }
  return f;
}

void write_pgm_file(const std::string& path, const Frame& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw PreconditionError("pgm: cannot open " + path + " for writing");
  write_pgm(os, f);
}

Frame read_pgm_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw PreconditionError("pgm: cannot open " + path);
  return read_pgm(is);
}

SmoothTexture::SmoothTexture(std::uint64_t seed, int waves, double min_period,
                             double max_period) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> period(min_period, max_period);
  std::uniform_real_distribution<double> amp(0.5, 1.0);
  waves_.reserve(static_cast<std::size_t>(waves));
  double total = 0.0;
  for (int i = 0; i < waves; ++i) {
    const double dir = angle(rng);
    const double k = 2.0 * kPi / period(rng);
    Wave w{k * std::cos(dir), k * std::sin(dir), angle(rng), amp(rng)};
    total += w.amplitude;
    waves_.push_back(w);
  }
  // Normalise to a standard deviation of roughly 70 grey levels around 128.
  for (auto& w : waves_) w.amplitude *= 100.0 / std::sqrt(total * total / waves);
}

double SmoothTexture::value(double x, double y) const {
  double v = 128.0;
  for (const auto& w : waves_) v += w.amplitude * std::sin(w.kx * x + w.ky * y + w.phase);
  return v;
}

Frame SmoothTexture::render(int width, int height, double dx, double dy) const {
  Frame f(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      f.at(x, y) = static_cast<float>(value(x - dx, y - dy));
    }
  }
  return f;
}

Frame render_square(int width, int height, int x0, int y0, int size, float fg, float bg) {
  Frame f(width, height, bg);
  for (int y = std::max(y0, 0); y < std::min(y0 + size, height); ++y) {
    for (int x = std::max(x0, 0); x < std::min(x0 + size, width); ++x) f.at(x, y) = fg;
  }
  return f;
}

}  // namespace stairbot::perception
