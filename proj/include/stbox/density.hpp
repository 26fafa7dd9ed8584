#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stbox/annotations.hpp"

namespace stbox {

/// Class-specific joint pdf of box width and height, discretized on a
/// uniform grid. `mass` holds cell masses (density times cell area),
/// normalized to sum to one. Row i indexes w_axis, column j indexes h_axis.
struct ClassPrior {
  int class_id = 0;
  Eigen::VectorXd w_axis;
  Eigen::VectorXd h_axis;
  Eigen::MatrixXd mass;
  double mean_w = 0.0;
  double mean_h = 0.0;
  double std_w = 0.0;
  double std_h = 0.0;
  int n_samples = 0;
  double bandwidth_w = 0.0;
  double bandwidth_h = 0.0;

  double cell_w() const { return w_axis.size() > 1 ? w_axis[1] - w_axis[0] : 1.0; }
  double cell_h() const { return h_axis.size() > 1 ? h_axis[1] - h_axis[0] : 1.0; }
  double cell_area() const { return cell_w() * cell_h(); }
};

struct InsufficientSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gaussian-kernel density estimate of the joint (w, h) pdf, with Scott's
/// rule bandwidths floored at 0.5 px and a grid spanning the data range
/// padded by three bandwidths per axis.
ClassPrior fit_prior(int class_id, const std::vector<std::pair<double, double>>& samples,
                     int grid_size = 100);

/// Mass-weighted mean of the grid coordinates.
std::pair<double, double> grid_mean(const ClassPrior& prior);

/// KL(p || q) over p's grid. If q lives on a different grid its density is
/// re-evaluated on p's grid by bilinear interpolation and renormalized.
/// q cells are floored at 1e-12 to keep the sum finite on disjoint support.
double kl_divergence(const ClassPrior& p, const ClassPrior& q);

struct KlPoint {
  double fraction;
  double kl;
};

/// KL divergence of priors fitted from growing image subsets against the
/// full-data prior. Subsets are prefixes of one seeded shuffle, so larger
/// fractions contain smaller ones. Fractions with fewer than two samples
/// are skipped with a warning.
std::vector<KlPoint> kl_curve(const Dataset& images, int class_id,
                              const std::vector<double>& fractions, std::uint64_t seed);

/// Smallest fraction whose KL is at or below the threshold; 1.0 if none.
double advise_budget(const std::vector<KlPoint>& curve, double threshold = 0.05);

/// CSV `w,h,density`, one row per grid cell.
std::string prior_to_csv(const ClassPrior& prior);

/// CSV `fraction,kl`.
std::string kl_curve_to_csv(const std::vector<KlPoint>& curve);

}  // namespace stbox
