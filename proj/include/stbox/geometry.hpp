#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stbox {

/// Axis-aligned box stored as center plus size, in pixels.
struct CenterBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  void validate() const {
    if (!(w > 0.0) || !(h > 0.0)) throw std::invalid_argument("box size must be positive");
    if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) || !std::isfinite(h))
      throw std::invalid_argument("box fields must be finite");
  }

  double area() const { return w * h; }
  double left() const { return cx - 0.5 * w; }
  double right() const { return cx + 0.5 * w; }
  double top() const { return cy - 0.5 * h; }
  double bottom() const { return cy + 0.5 * h; }
};

struct PointAnnotation {
  double px = 0.0;
  double py = 0.0;

  void validate() const {
    if (!std::isfinite(px) || !std::isfinite(py))
      throw std::invalid_argument("point fields must be finite");
  }
};

/// Intersection-over-union of two boxes. Touching edges count as disjoint.
inline double iou(const CenterBox& a, const CenterBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

/// IOU of two boxes sharing a common center. Always positive.
inline double concentric_iou(double w1, double h1, double w2, double h2) {
  const double inter = std::min(w1, w2) * std::min(h1, h2);
  return inter / (w1 * h1 + w2 * h2 - inter);
}

}  // namespace stbox
