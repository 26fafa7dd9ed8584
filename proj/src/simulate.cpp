#include "stbox/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stbox/rng.hpp"

namespace stbox {

NoiseModel default_noise_model() {
  // Line through (sqrt A, mu) = (18, 5) and (198, 17).
  NoiseModel m;
  m.slope = 12.0 / 180.0;
  m.intercept = 5.0 - m.slope * 18.0;
  m.sigma = 3.0;
  return m;
}

PointAnnotation generate_point(const CenterBox& box, const NoiseModel& model,
                               std::mt19937_64& rng) {
  box.validate();
  const double mu = model.mean_distance(std::sqrt(box.area()));
  double r = mu;
  if (model.sigma > 0.0) {
    std::normal_distribution<double> normal(mu, model.sigma);
    r = normal(rng);
  }
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * M_PI);
  const double theta = uniform(rng);
  // A negative radius flips the (uniform) direction, so |r| is the error
  // distance and the offset stays isotropic.
  return {box.cx + r * std::cos(theta), box.cy + r * std::sin(theta)};
}

std::pair<Dataset, Dataset> partition_dataset(const Dataset& images, double well_fraction,
                                              std::uint64_t seed) {
  const std::size_t n = images.images.size();
  if (n < 2) throw std::invalid_argument("partition needs at least 2 images");
  if (!(well_fraction > 0.0) || !(well_fraction < 1.0))
    throw DegeneratePartition("degenerate partition: well_fraction must lie in (0, 1)");
  const auto n_well =
      static_cast<std::size_t>(std::lround(well_fraction * static_cast<double>(n)));
  if (n_well == 0 || n_well == n)
    throw DegeneratePartition("degenerate partition: one split would be empty");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto rng = substream(seed, "partition");
  deterministic_shuffle(order, rng);

  std::vector<bool> is_well(n, false);
  for (std::size_t k = 0; k < n_well; ++k) is_well[order[k]] = true;

  Dataset well, weak;
  for (std::size_t i = 0; i < n; ++i)
    (is_well[i] ? well : weak).images.push_back(images.images[i]);
  return {std::move(well), std::move(weak)};
}

Dataset weaken(const Dataset& images, const NoiseModel& model, std::uint64_t seed) {
  Dataset out = images;
  for (auto& img : out.images) {
    for (std::size_t idx = 0; idx < img.annotations.size(); ++idx) {
      auto& ann = img.annotations[idx];
      if (!ann.is_box()) continue;
      auto rng = substream(seed, img.image_id, idx);
      ann.geometry = generate_point(ann.box(), model, rng);
    }
  }
  return out;
}

double box_quality(const Dataset& produced, const Dataset& reference) {
  if (produced.images.size() != reference.images.size())
    throw AlignmentError("annotation alignment failure: image count mismatch");
  std::size_t total = 0;
  std::size_t good = 0;
  for (std::size_t i = 0; i < produced.images.size(); ++i) {
    const auto& a = produced.images[i];
    const auto& b = reference.images[i];
    if (a.image_id != b.image_id || a.annotations.size() != b.annotations.size())
      throw AlignmentError("annotation alignment failure: image " + a.image_id);
    for (std::size_t j = 0; j < a.annotations.size(); ++j) {
      if (!a.annotations[j].is_box() || !b.annotations[j].is_box())
        throw AlignmentError("annotation alignment failure: non-box annotation in " +
                             a.image_id);
      ++total;
      if (iou(a.annotations[j].box(), b.annotations[j].box()) > 0.5) ++good;
    }
  }
  if (total == 0) return 0.0;
  return static_cast<double>(good) / static_cast<double>(total);
}

}  // namespace stbox
