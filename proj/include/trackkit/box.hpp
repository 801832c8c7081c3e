#pragma once

#include <algorithm>

namespace trackkit {

/// Axis-aligned box in pixel coordinates, corner form. Continuous
/// coordinates, no +1 pixel correction. Valid boxes have xmin <= xmax
/// and ymin <= ymax; zero-area (degenerate) boxes are allowed.
struct Box {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;
};

inline bool is_valid(const Box& b) noexcept {
  return b.xmin <= b.xmax && b.ymin <= b.ymax;
}

inline double area(const Box& b) noexcept {
  return (b.xmax - b.xmin) * (b.ymax - b.ymin);
}

inline Box translated(const Box& b, double dx, double dy) noexcept {
  return {b.xmin + dx, b.ymin + dy, b.xmax + dx, b.ymax + dy};
}

/// Intersection over union. Returns 0 when the union area is 0, which
/// covers every degenerate pairing.
inline double iou(const Box& a, const Box& b) noexcept {
  const double iw = std::min(a.xmax, b.xmax) - std::max(a.xmin, b.xmin);
  const double ih = std::min(a.ymax, b.ymax) - std::max(a.ymin, b.ymin);
  const double inter = std::max(iw, 0.0) * std::max(ih, 0.0);
  const double uni = area(a) + area(b) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

/// IOU clamped to zero below `floor`. The floor itself survives
/// (inclusive boundary).
inline double truncated_iou(const Box& a, const Box& b, double floor) noexcept {
  const double v = iou(a, b);
  return v >= floor ? v : 0.0;
}

}  // namespace trackkit
