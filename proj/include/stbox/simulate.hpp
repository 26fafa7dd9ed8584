#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "stbox/annotations.hpp"

namespace stbox {

/// Point-annotation noise: error distance Normal(slope * sqrt(A) +
/// intercept, sigma), direction uniform. sigma = 0 collapses to the mean
/// distance exactly.
struct NoiseModel {
  double slope = 0.0;
  double intercept = 0.0;
  double sigma = 3.0;

  double mean_distance(double sqrt_area) const { return slope * sqrt_area + intercept; }

  static NoiseModel zero() { return {0.0, 0.0, 0.0}; }
};

/// Line through (sqrt A, mu) anchors (18, 5) and (198, 17), sigma 3 px.
NoiseModel default_noise_model();

/// Draws a noisy point for a box center. The signed normal radius keeps the
/// direction isotropic; its magnitude is the error distance.
PointAnnotation generate_point(const CenterBox& box, const NoiseModel& model,
                               std::mt19937_64& rng);

struct DegeneratePartition : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Seeded image-level split into disjoint well- and weakly-labelled sets.
std::pair<Dataset, Dataset> partition_dataset(const Dataset& images, double well_fraction,
                                              std::uint64_t seed);

/// Replaces every box annotation with a noisy point. Each annotation uses
/// its own substream keyed on (seed, image id, annotation index), so the
/// result is independent of iteration order.
Dataset weaken(const Dataset& images, const NoiseModel& model, std::uint64_t seed);

struct AlignmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fraction of aligned (image id, annotation index) box pairs whose IOU
/// exceeds 0.5 strictly.
double box_quality(const Dataset& produced, const Dataset& reference);

}  // namespace stbox
