#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include "stbox/geometry.hpp"

namespace stbox {

struct Prediction {
  CenterBox box;
  double confidence = 0.0;
};

struct SelectionConfig {
  double tau_s = 0.2;
  double tau_iou = 0.5;
};

/// s(B) = P(B) * exp(-||p - u||^2), distance in raw pixels.
double score(const Prediction& prediction, const PointAnnotation& point);

/// Point-to-box selection: keep predictions passing both the confidence and
/// the ST-box overlap filters, return the best-scoring one, or the ST box
/// itself when none qualify. Ties go to the earliest prediction.
CenterBox select_box(const PointAnnotation& point, const CenterBox& st_box,
                     const std::vector<Prediction>& predictions,
                     const SelectionConfig& config = {});

/// Like select_box but also reports whether a prediction was chosen.
struct Selected {
  CenterBox box;
  bool from_prediction = false;
};
Selected select_box_tagged(const PointAnnotation& point, const CenterBox& st_box,
                           const std::vector<Prediction>& predictions,
                           const SelectionConfig& config = {});

struct Foreground {
  std::size_t target_index;
};
struct Background {};
struct Ignore {};
using AnchorLabel = std::variant<Foreground, Background, Ignore>;

/// RetinaNet-style assignment: foreground at max IOU >= 0.5, background
/// below 0.4, ignore in between. No targets means all background.
std::vector<AnchorLabel> assign_anchors(const std::vector<CenterBox>& anchors,
                                        const std::vector<CenterBox>& targets);

/// beta = alpha / sqrt(mean class area).
double beta(double alpha, double mean_area);

struct BoxLossItem {
  std::array<double, 4> predicted;
  std::array<double, 4> target;
};

struct PointLossItem {
  std::array<double, 2> predicted;
  std::array<double, 2> target;
  double mean_area;  // A_c of the item's class
};

struct LossBatch {
  std::vector<BoxLossItem> box_items;
  std::vector<PointLossItem> point_items;
  double alpha = 0.0;
};

/// Mixed L1 regression loss; point terms are downweighted by 1 / (1 + beta).
/// An empty group contributes nothing. Both groups empty is an error.
double regression_loss(const LossBatch& batch);

}  // namespace stbox
