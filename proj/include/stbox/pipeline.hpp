#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stbox/selection.hpp"
#include "stbox/simulate.hpp"
#include "stbox/solver.hpp"

namespace stbox {

struct PipelineConfig {
  double well_fraction = 0.05;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  NoiseModel noise = default_noise_model();
  SelectionConfig selection;
  SolverConfig solver;
  int grid_size = 100;
};

/// Predictions for one image, keyed by image id.
using PredictionMap = std::map<std::string, std::vector<Prediction>>;

struct PipelineResult {
  Dataset well;
  Dataset weak_points;
  Dataset reference;  // true boxes of the weak split
  Dataset selected;   // weak split with points replaced by boxes
  std::string report_json;
};

/// Desk-scale run of the whole method: partition, weaken, fit priors from
/// the well split, solve mean-IOU boxes, select a box for every weak point,
/// and score the result against the retained reference boxes.
PipelineResult run_pipeline(const Dataset& annotations, const PipelineConfig& config,
                            const std::optional<PredictionMap>& predictions = std::nullopt);

PredictionMap load_predictions(const std::string& path);
PredictionMap parse_predictions(const std::string& json_text,
                                const std::string& origin = "<string>");

}  // namespace stbox
