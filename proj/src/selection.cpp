#include "stbox/selection.hpp"

#include <cmath>
#include <stdexcept>

namespace stbox {

double score(const Prediction& prediction, const PointAnnotation& point) {
  const double dx = point.px - prediction.box.cx;
  const double dy = point.py - prediction.box.cy;
  return prediction.confidence * std::exp(-(dx * dx + dy * dy));
}

Selected select_box_tagged(const PointAnnotation& point, const CenterBox& st_box,
                           const std::vector<Prediction>& predictions,
                           const SelectionConfig& config) {
  const Prediction* best = nullptr;
  double best_score = -1.0;
  for (const auto& pred : predictions) {
    if (pred.confidence < config.tau_s) continue;
    if (iou(st_box, pred.box) < config.tau_iou) continue;
    const double s = score(pred, point);
    if (s > best_score) {  // strict: ties keep the earliest candidate
      best = &pred;
      best_score = s;
    }
  }
  if (best) return {best->box, true};
  return {st_box, false};
}

CenterBox select_box(const PointAnnotation& point, const CenterBox& st_box,
                     const std::vector<Prediction>& predictions, const SelectionConfig& config) {
  return select_box_tagged(point, st_box, predictions, config).box;
}

std::vector<AnchorLabel> assign_anchors(const std::vector<CenterBox>& anchors,
                                        const std::vector<CenterBox>& targets) {
  std::vector<AnchorLabel> labels;
  labels.reserve(anchors.size());
  for (const auto& anchor : anchors) {
    double best_iou = 0.0;
    std::size_t best_idx = 0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const double v = iou(anchor, targets[t]);
      if (v > best_iou) {
        best_iou = v;
        best_idx = t;
      }
    }
    if (!targets.empty() && best_iou >= 0.5)
      labels.emplace_back(Foreground{best_idx});
    else if (best_iou < 0.4)
      labels.emplace_back(Background{});
    else
      labels.emplace_back(Ignore{});
  }
  return labels;
}

double beta(double alpha, double mean_area) {
  if (!(mean_area > 0.0)) throw std::invalid_argument("mean_area must be positive");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be non-negative");
  return alpha / std::sqrt(mean_area);
}

double regression_loss(const LossBatch& batch) {
  if (batch.box_items.empty() && batch.point_items.empty())
    throw std::invalid_argument("empty loss batch");

  double loss = 0.0;
  if (!batch.box_items.empty()) {
    double sum = 0.0;
    for (const auto& item : batch.box_items)
      for (int k = 0; k < 4; ++k) sum += std::abs(item.predicted[k] - item.target[k]);
    loss += sum / static_cast<double>(batch.box_items.size());
  }
  if (!batch.point_items.empty()) {
    double sum = 0.0;
    for (const auto& item : batch.point_items) {
      double l1 = 0.0;
      for (int k = 0; k < 2; ++k) l1 += std::abs(item.predicted[k] - item.target[k]);
      sum += l1 / (1.0 + beta(batch.alpha, item.mean_area));
    }
    loss += sum / static_cast<double>(batch.point_items.size());
  }
  return loss;
}

}  // namespace stbox
