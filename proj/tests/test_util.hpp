#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stbox/annotations.hpp"
#include "stbox/density.hpp"

namespace stbox::testutil {

/// Prior with all mass on a single (w, h) atom.
inline ClassPrior atom_prior(double w, double h) {
  ClassPrior p;
  p.class_id = 0;
  p.w_axis = Eigen::VectorXd::Constant(1, w);
  p.h_axis = Eigen::VectorXd::Constant(1, h);
  p.mass = Eigen::MatrixXd::Constant(1, 1, 1.0);
  p.mean_w = w;
  p.mean_h = h;
  p.std_w = 0.0;
  p.std_h = 0.0;
  p.n_samples = 2;
  return p;
}

/// Two-atom prior on the diagonal cells of a 2x2 grid. Bounds are shaped by
/// the given mean/std so the search box spans both atoms.
inline ClassPrior two_atom_prior(double w1, double w2, double m1, double m2, double mean,
                                 double stddev) {
  ClassPrior p;
  p.class_id = 0;
  p.w_axis.resize(2);
  p.w_axis << w1, w2;
  p.h_axis = p.w_axis;
  p.mass = Eigen::MatrixXd::Zero(2, 2);
  p.mass(0, 0) = m1;
  p.mass(1, 1) = m2;
  p.mean_w = p.mean_h = mean;
  p.std_w = p.std_h = stddev;
  p.n_samples = 2;
  return p;
}

/// Gaussian (w, h) samples, truncated at 1 px.
inline std::vector<std::pair<double, double>> gaussian_sizes(std::mt19937_64& rng, int n,
                                                             double mean_w, double mean_h,
                                                             double std_w, double std_h) {
  std::normal_distribution<double> dw(mean_w, std_w), dh(mean_h, std_h);
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  while (static_cast<int>(out.size()) < n) {
    const double w = dw(rng);
    const double h = dh(rng);
    if (w > 1.0 && h > 1.0) out.emplace_back(w, h);
  }
  return out;
}

/// Random unimodal KDE prior, for oracle and stability checks.
inline ClassPrior random_unimodal_prior(std::mt19937_64& rng, int class_id = 0) {
  std::uniform_real_distribution<double> mean_dist(20.0, 120.0);
  std::uniform_real_distribution<double> std_dist(2.0, 12.0);
  std::uniform_int_distribution<int> n_dist(50, 200);
  const auto samples = gaussian_sizes(rng, n_dist(rng), mean_dist(rng), mean_dist(rng),
                                      std_dist(rng), std_dist(rng));
  return fit_prior(class_id, samples, 100);
}

/// Synthetic box-labelled dataset. Class 0 has a fixed 30x30 size, class 1
/// varies around 60x40.
inline Dataset synthetic_dataset(int n_images, std::uint64_t seed, bool fixed_size_only = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cx(40.0, 460.0), cy(40.0, 460.0);
  std::normal_distribution<double> w1(60.0, 3.0), h1(40.0, 2.0);
  Dataset ds;
  for (int i = 0; i < n_images; ++i) {
    ImageRecord img;
    img.image_id = "img_" + std::to_string(i);
    img.width = 512;
    img.height = 512;
    img.annotations.push_back({0, CenterBox{cx(rng), cy(rng), 30.0, 30.0}, std::nullopt});
    if (!fixed_size_only) {
      const double w = std::max(5.0, w1(rng));
      const double h = std::max(5.0, h1(rng));
      img.annotations.push_back({1, CenterBox{cx(rng), cy(rng), w, h}, std::nullopt});
    }
    ds.images.push_back(std::move(img));
  }
  return ds;
}

}  // namespace stbox::testutil
