#include "tvbayes/harness/signals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "tvbayes/errors.hpp"

namespace tvbayes {
namespace {

struct Step {
  double start;
  double value;
};

// Plateau levels, each holding from `start` to the next entry.
constexpr std::array<Step, 6> kBlocky = {{{0.0, 0.0},
                                          {0.12, 0.6},
                                          {0.30, 0.2},
                                          {0.45, 1.0},
                                          {0.65, 0.4},
                                          {0.82, 0.0}}};

constexpr std::array<Step, 4> kBlockyLeft = {{{0.0, 0.0}, {0.10, 0.7}, {0.25, 0.3}, {0.40, 0.0}}};

double step_value(const Step* first, const Step* last, double t) {
  double v = first->value;
  for (const Step* s = first; s != last; ++s) {
    if (t >= s->start) v = s->value;
  }
  return v;
}

struct Ellipse {
  double intensity;
  double a;
  double b;
  double x0;
  double y0;
  double phi_deg;
};

// Shepp-Logan with the higher-contrast intensities of Toft's variant.
constexpr std::array<Ellipse, 10> kPhantom = {{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

struct Rect {
  int r0, r1, c0, c1;  // half-open on the 42 x 42 grid
  double value;
};

constexpr std::array<Rect, 5> kBlocks = {{
    {5, 17, 5, 23, 0.5},
    {22, 37, 6, 18, 1.0},
    {9, 33, 27, 37, 0.75},
    {26, 31, 29, 34, 0.25},
    {20, 25, 20, 25, 0.35},
}};

}  // namespace

SignalKind parse_signal_kind(const std::string& name) {
  if (name == "blocky") return SignalKind::Blocky;
  if (name == "blocky_smooth") return SignalKind::BlockySmooth;
  throw DomainError("unknown signal kind '" + name + "' (expected blocky or blocky_smooth)");
}

ImageKind parse_image_kind(const std::string& name) {
  if (name == "blocks42") return ImageKind::Blocks42;
  if (name == "shepp_logan") return ImageKind::SheppLogan;
  throw DomainError("unknown image kind '" + name + "' (expected blocks42 or shepp_logan)");
}

std::string to_string(SignalKind kind) {
  return kind == SignalKind::Blocky ? "blocky" : "blocky_smooth";
}

std::string to_string(ImageKind kind) {
  return kind == ImageKind::Blocks42 ? "blocks42" : "shepp_logan";
}

Vector make_signal_1d(SignalKind kind, int points) {
  if (points < 8) throw DomainError("make_signal_1d: at least 8 points are required");
  Vector s(points);
  for (int i = 0; i < points; ++i) {
    const double t = (i + 0.5) / points;
    if (kind == SignalKind::Blocky) {
      s[i] = step_value(kBlocky.data(), kBlocky.data() + kBlocky.size(), t);
    } else if (t < 0.5) {
      s[i] = step_value(kBlockyLeft.data(), kBlockyLeft.data() + kBlockyLeft.size(), t);
    } else {
      const double u = (t - 0.5) / 0.45;
      s[i] = u < 1.0 ? 0.45 * (1.0 - std::cos(2.0 * std::numbers::pi * u)) : 0.0;
    }
  }
  return s;
}

int default_image_size(ImageKind kind) { return kind == ImageKind::Blocks42 ? 42 : 200; }

double shepp_logan_value(double x, double y) {
  double v = 0.0;
  for (const Ellipse& e : kPhantom) {
    const double phi = e.phi_deg * std::numbers::pi / 180.0;
    const double dx = x - e.x0;
    const double dy = y - e.y0;
    const double u = dx * std::cos(phi) + dy * std::sin(phi);
    const double w = -dx * std::sin(phi) + dy * std::cos(phi);
    if (u * u / (e.a * e.a) + w * w / (e.b * e.b) <= 1.0) v += e.intensity;
  }
  return std::clamp(v, 0.0, 1.0);
}

Vector make_image_2d(ImageKind kind, int size) {
  if (size < 2) throw DomainError("make_image_2d: size must be at least 2");
  Vector img(static_cast<Index>(size) * size);
  for (int j = 0; j < size; ++j) {
    for (int i = 0; i < size; ++i) {
      double v = 0.0;
      if (kind == ImageKind::SheppLogan) {
        const double x = -1.0 + (2.0 * j + 1.0) / size;
        const double y = 1.0 - (2.0 * i + 1.0) / size;
        v = shepp_logan_value(x, y);
      } else {
        // Pixel centre mapped onto the 42 x 42 design grid.
        const double gi = (i + 0.5) * 42.0 / size;
        const double gj = (j + 0.5) * 42.0 / size;
        for (const Rect& r : kBlocks) {
          if (gi >= r.r0 && gi < r.r1 && gj >= r.c0 && gj < r.c1) v = r.value;
        }
      }
      img[i + static_cast<Index>(j) * size] = v;
    }
  }
  return img;
}

}  // namespace tvbayes
