#pragma once

#include <string>

#include "tvbayes/types.hpp"

namespace tvbayes {

enum class SignalKind { Blocky, BlockySmooth };
enum class ImageKind { Blocks42, SheppLogan };

SignalKind parse_signal_kind(const std::string& name);
ImageKind parse_image_kind(const std::string& name);
std::string to_string(SignalKind kind);
std::string to_string(ImageKind kind);

/// Test signals sampled at t_i = (i + 1/2) / points on [0, 1], values in
/// [0, 1]. Blocky is piecewise constant with five jumps; BlockySmooth has
/// three plateaus on the left half and a raised-cosine bump on the right.
Vector make_signal_1d(SignalKind kind, int points);

/// size x size image, stacked column by column. Blocks42 is a fixed pattern
/// of overlapping rectangles laid out on a 42 x 42 grid and rescaled to
/// `size`; SheppLogan is the ten-ellipse phantom (modified intensities) on
/// [-1, 1]^2 with row 0 at the top.
Vector make_image_2d(ImageKind kind, int size);
int default_image_size(ImageKind kind);

/// Phantom intensity at a point of [-1, 1]^2 (y pointing up).
double shepp_logan_value(double x, double y);

}  // namespace tvbayes
