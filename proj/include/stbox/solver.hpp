#pragma once

#include <Eigen/Dense>
#include <string>

#include "stbox/density.hpp"

namespace stbox {

enum class StBoxKind { Mean, MeanIou };

/// A stochastic box: a (w, h) size drawn from a class prior, to be centered
/// at a point annotation by the caller.
struct StBox {
  StBoxKind kind = StBoxKind::Mean;
  double w = 0.0;
  double h = 0.0;
  double objective_value = 0.0;  // expected IOU at (w, h)
};

struct SolverStats {
  int iterations = 0;
  double final_step = 0.0;
  int evaluations = 0;
};

struct SolverConfig {
  double initial_step = 0.0;  // 0 selects (upper - lower) / 10 per axis
  double step_tolerance = 1e-3;
  int max_iterations = 10000;
  double bound_sigmas = 5.0;
};

/// Expected IOU of a box of size (w, h) against the prior, both concentric.
/// Evaluated as a mass-weighted sum over the prior grid.
double expected_iou(double w, double h, const ClassPrior& prior);

/// Precomputed evaluator for repeated expected-IOU queries on one prior.
/// Cells with negligible mass are dropped; the truncation error is below
/// the dropped mass total (IOU is bounded by one).
class ExpectedIouEvaluator {
 public:
  explicit ExpectedIouEvaluator(const ClassPrior& prior, double mass_cutoff = 1e-14);
  double operator()(double w, double h) const;

 private:
  Eigen::ArrayXd w_;
  Eigen::ArrayXd h_;
  Eigen::ArrayXd area_;
  Eigen::ArrayXd mass_;
};

/// Search bounds [mu - k sigma, mu + k sigma] per axis, lower-clamped at
/// 0.5 px. A zero-sigma axis is widened to +-1 px with a warning.
struct SearchBounds {
  double w_lo, w_hi, h_lo, h_hi;
};
SearchBounds search_bounds(const ClassPrior& prior, double bound_sigmas);

StBox mean_box(const ClassPrior& prior);

/// Compass pattern search maximizing expected IOU, started from the mean
/// box. Polls +w, -w, +h, -h, takes the first strict improvement, halves
/// the step otherwise. Deterministic.
StBox mean_iou_box(const ClassPrior& prior, const SolverConfig& config = {},
                   SolverStats* stats = nullptr);

/// Same search from an arbitrary in-bounds start (multi-start checks).
StBox mean_iou_box_from(const ClassPrior& prior, double start_w, double start_h,
                        const SolverConfig& config = {}, SolverStats* stats = nullptr);

/// Exhaustive oracle: evaluates the expected IOU on a resolution^2 grid of
/// candidates over the search bounds and returns the argmax cell, ties
/// broken toward the smallest (w, then h). Independent of the pattern
/// search path.
StBox brute_force_mean_iou(const ClassPrior& prior, int resolution = 200);

std::string stbox_kind_name(StBoxKind kind);

}  // namespace stbox
