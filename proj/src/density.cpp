#include "stbox/density.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

#include "stbox/rng.hpp"

namespace stbox {

namespace {

constexpr double kAxisFloor = 1e-3;        // grid never reaches zero size
constexpr double kBandwidthFloor = 0.5;    // survives duplicate samples
constexpr double kKlEpsilon = 1e-12;

Eigen::VectorXd linspace(double lo, double hi, int n) {
  Eigen::VectorXd v(n);
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = lo + i * step;
  return v;
}

// Kernel matrix: rows are grid points, columns are samples.
Eigen::MatrixXd gaussian_kernels(const Eigen::VectorXd& axis, const Eigen::VectorXd& samples,
                                 double bandwidth) {
  const double inv2s2 = 1.0 / (2.0 * bandwidth * bandwidth);
  const double norm = 1.0 / (bandwidth * std::sqrt(2.0 * M_PI));
  Eigen::MatrixXd k(axis.size(), samples.size());
  for (Eigen::Index j = 0; j < samples.size(); ++j)
    k.col(j) = (-(axis.array() - samples[j]).square() * inv2s2).exp() * norm;
  return k;
}

bool same_grid(const ClassPrior& p, const ClassPrior& q) {
  return p.w_axis.size() == q.w_axis.size() && p.h_axis.size() == q.h_axis.size() &&
         (p.w_axis.array() == q.w_axis.array()).all() &&
         (p.h_axis.array() == q.h_axis.array()).all();
}

// Bilinear density lookup on q's grid; zero outside its hull.
double density_at(const ClassPrior& q, double w, double h) {
  const auto& wa = q.w_axis;
  const auto& ha = q.h_axis;
  if (w < wa[0] || w > wa[wa.size() - 1] || h < ha[0] || h > ha[ha.size() - 1]) return 0.0;
  const double inv_area = 1.0 / q.cell_area();
  auto locate = [](const Eigen::VectorXd& axis, double x) {
    if (axis.size() == 1) return std::pair<Eigen::Index, double>{0, 0.0};
    const double step = axis[1] - axis[0];
    Eigen::Index i = static_cast<Eigen::Index>((x - axis[0]) / step);
    i = std::clamp<Eigen::Index>(i, 0, axis.size() - 2);
    return std::pair<Eigen::Index, double>{i, (x - axis[i]) / step};
  };
  const auto [i, tw] = locate(wa, w);
  const auto [j, th] = locate(ha, h);
  const Eigen::Index i1 = std::min<Eigen::Index>(i + 1, wa.size() - 1);
  const Eigen::Index j1 = std::min<Eigen::Index>(j + 1, ha.size() - 1);
  const double d00 = q.mass(i, j) * inv_area;
  const double d10 = q.mass(i1, j) * inv_area;
  const double d01 = q.mass(i, j1) * inv_area;
  const double d11 = q.mass(i1, j1) * inv_area;
  return (1 - tw) * (1 - th) * d00 + tw * (1 - th) * d10 + (1 - tw) * th * d01 + tw * th * d11;
}

}  // namespace

ClassPrior fit_prior(int class_id, const std::vector<std::pair<double, double>>& samples,
                     int grid_size) {
  const int n = static_cast<int>(samples.size());
  if (n < 2)
    throw InsufficientSamples("insufficient samples for class " + std::to_string(class_id));
  if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");

  Eigen::VectorXd ws(n), hs(n);
  for (int i = 0; i < n; ++i) {
    if (!(samples[i].first > 0.0) || !(samples[i].second > 0.0))
      throw std::invalid_argument("box sizes must be positive");
    ws[i] = samples[i].first;
    hs[i] = samples[i].second;
  }

  ClassPrior prior;
  prior.class_id = class_id;
  prior.n_samples = n;
  prior.mean_w = ws.mean();
  prior.mean_h = hs.mean();
  prior.std_w = std::sqrt((ws.array() - prior.mean_w).square().sum() / (n - 1));
  prior.std_h = std::sqrt((hs.array() - prior.mean_h).square().sum() / (n - 1));

  // Scott's rule for 2D data, floored against degenerate spreads.
  const double scott = std::pow(static_cast<double>(n), -1.0 / 6.0);
  prior.bandwidth_w = std::max(prior.std_w * scott, kBandwidthFloor);
  prior.bandwidth_h = std::max(prior.std_h * scott, kBandwidthFloor);

  const double w_lo = std::max(ws.minCoeff() - 3.0 * prior.bandwidth_w, kAxisFloor);
  const double w_hi = ws.maxCoeff() + 3.0 * prior.bandwidth_w;
  const double h_lo = std::max(hs.minCoeff() - 3.0 * prior.bandwidth_h, kAxisFloor);
  const double h_hi = hs.maxCoeff() + 3.0 * prior.bandwidth_h;
  prior.w_axis = linspace(w_lo, w_hi, grid_size);
  prior.h_axis = linspace(h_lo, h_hi, grid_size);

  // Product kernel: the joint density on the grid is a rank-n outer sum,
  // computed as one matrix product.
  const Eigen::MatrixXd kw = gaussian_kernels(prior.w_axis, ws, prior.bandwidth_w);
  const Eigen::MatrixXd kh = gaussian_kernels(prior.h_axis, hs, prior.bandwidth_h);
  Eigen::MatrixXd density = (kw * kh.transpose()) / n;

  prior.mass = density * prior.cell_area();
  const double total = prior.mass.sum();
  if (!(total > 0.0)) throw std::runtime_error("degenerate density: zero total mass");
  prior.mass /= total;
  return prior;
}

std::pair<double, double> grid_mean(const ClassPrior& prior) {
  const double mw = (prior.mass.rowwise().sum().array() * prior.w_axis.array()).sum();
  const double mh = (prior.mass.colwise().sum().transpose().array() * prior.h_axis.array()).sum();
  return {mw, mh};
}

double kl_divergence(const ClassPrior& p, const ClassPrior& q) {
  Eigen::MatrixXd q_mass;
  if (same_grid(p, q)) {
    q_mass = q.mass;
  } else {
    q_mass.resize(p.w_axis.size(), p.h_axis.size());
    for (Eigen::Index i = 0; i < p.w_axis.size(); ++i)
      for (Eigen::Index j = 0; j < p.h_axis.size(); ++j)
        q_mass(i, j) = density_at(q, p.w_axis[i], p.h_axis[j]) * p.cell_area();
    const double total = q_mass.sum();
    if (total > 0.0) q_mass /= total;
  }

  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.mass.rows(); ++i)
    for (Eigen::Index j = 0; j < p.mass.cols(); ++j) {
      const double pij = p.mass(i, j);
      if (pij > 0.0) kl += pij * std::log(pij / std::max(q_mass(i, j), kKlEpsilon));
    }
  return kl;
}

std::vector<KlPoint> kl_curve(const Dataset& images, int class_id,
                              const std::vector<double>& fractions, std::uint64_t seed) {
  if (!std::is_sorted(fractions.begin(), fractions.end()))
    throw std::invalid_argument("fractions must be ascending");

  const auto full_sizes = box_sizes(images, class_id);
  if (full_sizes.size() < 2)
    throw InsufficientSamples("insufficient samples for class " + std::to_string(class_id));
  const ClassPrior full = fit_prior(class_id, full_sizes);

  // One shuffle per seed; every fraction takes a prefix, so subsets nest.
  std::vector<std::size_t> order(images.images.size());
  std::iota(order.begin(), order.end(), 0);
  auto rng = substream(seed, "kl_curve");
  deterministic_shuffle(order, rng);

  std::vector<KlPoint> curve;
  for (double f : fractions) {
    if (!(f > 0.0) || f > 1.0) throw std::invalid_argument("fractions must lie in (0, 1]");
    const auto count = static_cast<std::size_t>(
        std::lround(f * static_cast<double>(images.images.size())));
    std::vector<bool> member(images.images.size(), false);
    for (std::size_t k = 0; k < std::min(count, order.size()); ++k) member[order[k]] = true;

    std::vector<std::pair<double, double>> sizes;
    for (std::size_t idx = 0; idx < images.images.size(); ++idx) {
      if (!member[idx]) continue;
      for (const auto& ann : images.images[idx].annotations)
        if (ann.class_id == class_id && ann.is_box())
          sizes.emplace_back(ann.box().w, ann.box().h);
    }
    if (sizes.size() < 2) {
      std::cerr << "warning: fraction " << f << " yields " << sizes.size()
                << " samples for class " << class_id << ", point skipped\n";
      continue;
    }
    const ClassPrior sub = fit_prior(class_id, sizes);
    curve.push_back({f, kl_divergence(full, sub)});
  }
  return curve;
}

double advise_budget(const std::vector<KlPoint>& curve, double threshold) {
  if (curve.empty()) throw std::invalid_argument("empty kl curve");
  for (const auto& pt : curve)
    if (pt.kl <= threshold) return pt.fraction;
  return 1.0;
}

std::string prior_to_csv(const ClassPrior& prior) {
  std::ostringstream out;
  out.precision(17);
  out << "w,h,density\n";
  const double inv_area = 1.0 / prior.cell_area();
  for (Eigen::Index i = 0; i < prior.w_axis.size(); ++i)
    for (Eigen::Index j = 0; j < prior.h_axis.size(); ++j)
      out << prior.w_axis[i] << ',' << prior.h_axis[j] << ',' << prior.mass(i, j) * inv_area
          << '\n';
  return out.str();
}

std::string kl_curve_to_csv(const std::vector<KlPoint>& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "fraction,kl\n";
  for (const auto& pt : curve) out << pt.fraction << ',' << pt.kl << '\n';
  return out.str();
}

}  // namespace stbox
