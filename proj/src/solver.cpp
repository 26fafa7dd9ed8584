#include "stbox/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace stbox {

namespace {
constexpr double kSizeFloor = 0.5;  // px; search never reaches zero size
}

double expected_iou(double w, double h, const ClassPrior& prior) {
  ExpectedIouEvaluator eval(prior);
  return eval(w, h);
}

ExpectedIouEvaluator::ExpectedIouEvaluator(const ClassPrior& prior, double mass_cutoff) {
  const Eigen::Index nw = prior.w_axis.size();
  const Eigen::Index nh = prior.h_axis.size();
  std::vector<double> ws, hs, ms;
  ws.reserve(nw * nh);
  hs.reserve(nw * nh);
  ms.reserve(nw * nh);
  for (Eigen::Index i = 0; i < nw; ++i)
    for (Eigen::Index j = 0; j < nh; ++j) {
      const double m = prior.mass(i, j);
      if (m > mass_cutoff) {
        ws.push_back(prior.w_axis[i]);
        hs.push_back(prior.h_axis[j]);
        ms.push_back(m);
      }
    }
  const auto n = static_cast<Eigen::Index>(ws.size());
  w_ = Eigen::Map<Eigen::ArrayXd>(ws.data(), n);
  h_ = Eigen::Map<Eigen::ArrayXd>(hs.data(), n);
  mass_ = Eigen::Map<Eigen::ArrayXd>(ms.data(), n);
  area_ = w_ * h_;
}

double ExpectedIouEvaluator::operator()(double w, double h) const {
  const Eigen::ArrayXd inter = w_.min(w) * h_.min(h);
  return (mass_ * inter / (w * h + area_ - inter)).sum();
}

SearchBounds search_bounds(const ClassPrior& prior, double bound_sigmas) {
  SearchBounds b;
  auto axis = [&](double mu, double sigma, const char* name) {
    double lo = mu - bound_sigmas * sigma;
    double hi = mu + bound_sigmas * sigma;
    if (sigma == 0.0) {
      std::cerr << "warning: class " << prior.class_id << " has zero sigma on " << name
                << ", widening bounds to +-1 px\n";
      lo = mu - 1.0;
      hi = mu + 1.0;
    }
    lo = std::max(lo, kSizeFloor);
    hi = std::max(hi, lo + 1e-9);
    return std::pair<double, double>{lo, hi};
  };
  std::tie(b.w_lo, b.w_hi) = axis(prior.mean_w, prior.std_w, "w");
  std::tie(b.h_lo, b.h_hi) = axis(prior.mean_h, prior.std_h, "h");
  return b;
}

StBox mean_box(const ClassPrior& prior) {
  StBox box;
  box.kind = StBoxKind::Mean;
  box.w = prior.mean_w;
  box.h = prior.mean_h;
  box.objective_value = expected_iou(box.w, box.h, prior);
  return box;
}

namespace {

StBox compass_search(const ClassPrior& prior, double start_w, double start_h,
                     const SolverConfig& config, SolverStats* stats) {
  if (!(config.step_tolerance > 0.0)) throw std::invalid_argument("step_tolerance must be > 0");
  if (config.initial_step != 0.0 && !(config.initial_step > config.step_tolerance))
    throw std::invalid_argument("initial_step must exceed step_tolerance");
  if (config.max_iterations <= 0) throw std::invalid_argument("max_iterations must be > 0");

  const SearchBounds bounds = search_bounds(prior, config.bound_sigmas);
  const ExpectedIouEvaluator eval(prior);

  double x = std::clamp(start_w, bounds.w_lo, bounds.w_hi);
  double y = std::clamp(start_h, bounds.h_lo, bounds.h_hi);
  double step_w =
      config.initial_step > 0.0 ? config.initial_step : (bounds.w_hi - bounds.w_lo) / 10.0;
  double step_h =
      config.initial_step > 0.0 ? config.initial_step : (bounds.h_hi - bounds.h_lo) / 10.0;
  step_w = std::max(step_w, config.step_tolerance * 2.0);
  step_h = std::max(step_h, config.step_tolerance * 2.0);

  double fx = eval(x, y);
  int iterations = 0;
  int evaluations = 1;

  while (iterations < config.max_iterations &&
         std::max(step_w, step_h) >= config.step_tolerance) {
    ++iterations;
    // Poll order +w, -w, +h, -h; first strict improvement wins.
    const double cand[4][2] = {{std::min(x + step_w, bounds.w_hi), y},
                               {std::max(x - step_w, bounds.w_lo), y},
                               {x, std::min(y + step_h, bounds.h_hi)},
                               {x, std::max(y - step_h, bounds.h_lo)}};
    bool improved = false;
    for (const auto& c : cand) {
      if (c[0] == x && c[1] == y) continue;  // clamped onto the current point
      const double fc = eval(c[0], c[1]);
      ++evaluations;
      if (fc > fx) {
        x = c[0];
        y = c[1];
        fx = fc;
        improved = true;
        break;
      }
    }
    if (!improved) {
      step_w *= 0.5;
      step_h *= 0.5;
    }
  }

  if (stats) {
    stats->iterations = iterations;
    stats->final_step = std::max(step_w, step_h);
    stats->evaluations = evaluations;
  }
  StBox box;
  box.kind = StBoxKind::MeanIou;
  box.w = x;
  box.h = y;
  box.objective_value = fx;
  return box;
}

}  // namespace

StBox mean_iou_box(const ClassPrior& prior, const SolverConfig& config, SolverStats* stats) {
  return compass_search(prior, prior.mean_w, prior.mean_h, config, stats);
}

StBox mean_iou_box_from(const ClassPrior& prior, double start_w, double start_h,
                        const SolverConfig& config, SolverStats* stats) {
  return compass_search(prior, start_w, start_h, config, stats);
}

StBox brute_force_mean_iou(const ClassPrior& prior, int resolution) {
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
  const SearchBounds bounds = search_bounds(prior, 5.0);

  // Own packing and arithmetic: this path shares no evaluation code with
  // the pattern search route it checks.
  std::vector<double> cw, ch, cm;
  for (Eigen::Index i = 0; i < prior.w_axis.size(); ++i)
    for (Eigen::Index j = 0; j < prior.h_axis.size(); ++j)
      if (prior.mass(i, j) > 1e-15) {
        cw.push_back(prior.w_axis[i]);
        ch.push_back(prior.h_axis[j]);
        cm.push_back(prior.mass(i, j));
      }
  const auto n = static_cast<Eigen::Index>(cw.size());
  const Eigen::ArrayXd pw = Eigen::Map<Eigen::ArrayXd>(cw.data(), n);
  const Eigen::ArrayXd ph = Eigen::Map<Eigen::ArrayXd>(ch.data(), n);
  const Eigen::ArrayXd pm = Eigen::Map<Eigen::ArrayXd>(cm.data(), n);
  const Eigen::ArrayXd parea = pw * ph;

  StBox best;
  best.kind = StBoxKind::MeanIou;
  best.objective_value = -1.0;
  const double sw = (bounds.w_hi - bounds.w_lo) / (resolution - 1);
  const double sh = (bounds.h_hi - bounds.h_lo) / (resolution - 1);
  for (int i = 0; i < resolution; ++i) {
    const double w = bounds.w_lo + i * sw;
    const Eigen::ArrayXd mw = pw.min(w);
    for (int j = 0; j < resolution; ++j) {
      const double h = bounds.h_lo + j * sh;
      const Eigen::ArrayXd inter = mw * ph.min(h);
      const double val = (pm * inter / (w * h + parea - inter)).sum();
      if (val > best.objective_value) {  // strict: ties keep the smaller (w, h)
        best.w = w;
        best.h = h;
        best.objective_value = val;
      }
    }
  }
  return best;
}

std::string stbox_kind_name(StBoxKind kind) {
  return kind == StBoxKind::Mean ? "mean" : "mean_iou";
}

}  // namespace stbox
