#include "stbox/pipeline.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "stbox/density.hpp"

namespace stbox {

using nlohmann::json;

PredictionMap parse_predictions(const std::string& json_text, const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!root.is_array()) throw ParseError(origin + ": expected a top-level array");
  PredictionMap map;
  std::size_t idx = 0;
  for (const auto& jimg : root) {
    const std::string where = origin + ": [" + std::to_string(idx++) + "]";
    if (!jimg.is_object() || !jimg.contains("image_id") || !jimg["image_id"].is_string())
      throw ParseError(where + ": expected an object with \"image_id\"");
    std::vector<Prediction> preds;
    for (const auto& jp : jimg.value("predictions", json::array())) {
      if (!jp.contains("bbox") || !jp["bbox"].is_array() || jp["bbox"].size() != 4 ||
          !jp.contains("score") || !jp["score"].is_number())
        throw ParseError(where + ": prediction needs \"bbox\" [cx,cy,w,h] and \"score\"");
      Prediction p;
      p.box = {jp["bbox"][0].get<double>(), jp["bbox"][1].get<double>(),
               jp["bbox"][2].get<double>(), jp["bbox"][3].get<double>()};
      p.box.validate();
      p.confidence = jp["score"].get<double>();
      if (p.confidence < 0.0 || p.confidence > 1.0)
        throw ParseError(where + ": score must lie in [0, 1]");
      preds.push_back(p);
    }
    map[jimg["image_id"].get<std::string>()] = std::move(preds);
  }
  return map;
}

PredictionMap load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_predictions(buf.str(), path);
}

PipelineResult run_pipeline(const Dataset& annotations, const PipelineConfig& config,
                            const std::optional<PredictionMap>& predictions) {
  PipelineResult result;
  auto [well, weak] = partition_dataset(annotations, config.well_fraction, config.seed);
  result.well = std::move(well);
  result.reference = std::move(weak);
  result.weak_points = weaken(result.reference, config.noise, config.seed);

  json report;
  report["seed"] = config.seed;
  report["well_fraction"] = config.well_fraction;
  report["alpha"] = config.alpha;
  report["n_images"] = annotations.images.size();
  report["n_well_images"] = result.well.images.size();
  report["n_weak_images"] = result.reference.images.size();

  // Priors and ST boxes from the well split only.
  std::map<int, ClassPrior> priors;
  std::map<int, StBox> st_boxes;
  json jclasses = json::object();
  for (int cid : box_class_ids(result.well)) {
    const auto sizes = box_sizes(result.well, cid);
    json jc;
    jc["n_well_samples"] = sizes.size();
    if (sizes.size() < 2) {
      std::cerr << "warning: insufficient samples for class " << cid
                << " in the well split, class skipped\n";
      jc["skipped"] = true;
      jclasses[std::to_string(cid)] = std::move(jc);
      continue;
    }
    ClassPrior prior = fit_prior(cid, sizes, config.grid_size);
    SolverStats stats;
    const StBox mean = mean_box(prior);
    const StBox miou = mean_iou_box(prior, config.solver, &stats);
    std::cerr << "class " << cid << ": mean=(" << mean.w << "," << mean.h << ") mean_iou=("
              << miou.w << "," << miou.h << ") objective=" << miou.objective_value
              << " iterations=" << stats.iterations << " final_step=" << stats.final_step
              << "\n";
    jc["mean_w"] = prior.mean_w;
    jc["mean_h"] = prior.mean_h;
    jc["std_w"] = prior.std_w;
    jc["std_h"] = prior.std_h;
    jc["mean_box"] = {{"w", mean.w}, {"h", mean.h}, {"objective", mean.objective_value}};
    jc["mean_iou_box"] = {{"w", miou.w}, {"h", miou.h}, {"objective", miou.objective_value}};
    jc["beta"] = beta(config.alpha, prior.mean_w * prior.mean_h);
    // KL of the full-data pdf from the well-split pdf, per class.
    const auto full_sizes = box_sizes(annotations, cid);
    if (full_sizes.size() >= 2) {
      const ClassPrior full = fit_prior(cid, full_sizes, config.grid_size);
      jc["kl_full_vs_well"] = kl_divergence(full, prior);
    }
    priors.emplace(cid, std::move(prior));
    st_boxes.emplace(cid, miou);
    jclasses[std::to_string(cid)] = std::move(jc);
  }
  report["classes"] = std::move(jclasses);

  // Replace every weak point with a selected box.
  result.selected = result.weak_points;
  std::size_t from_prediction = 0, from_st_box = 0, skipped = 0;
  static const std::vector<Prediction> kNoPredictions;
  for (auto& img : result.selected.images) {
    const std::vector<Prediction>* preds = &kNoPredictions;
    if (predictions) {
      const auto it = predictions->find(img.image_id);
      if (it != predictions->end()) preds = &it->second;
    }
    for (auto& ann : img.annotations) {
      if (!ann.is_point()) continue;
      const auto it = st_boxes.find(ann.class_id);
      if (it == st_boxes.end()) {
        ++skipped;
        continue;
      }
      const PointAnnotation point = ann.point();
      const CenterBox st{point.px, point.py, it->second.w, it->second.h};
      const Selected sel = select_box_tagged(point, st, *preds, config.selection);
      ann.geometry = sel.box;
      ann.source = sel.from_prediction ? "prediction" : "st_box";
      ++(sel.from_prediction ? from_prediction : from_st_box);
    }
  }
  report["selection"] = {{"from_prediction", from_prediction},
                         {"from_st_box", from_st_box},
                         {"skipped", skipped}};

  // Quality against the retained true boxes, over annotations that did
  // receive a box.
  Dataset produced, ref;
  for (std::size_t i = 0; i < result.selected.images.size(); ++i) {
    ImageRecord pa = result.selected.images[i];
    ImageRecord ra = result.reference.images[i];
    ImageRecord pf{pa.image_id, pa.width, pa.height, {}};
    ImageRecord rf{ra.image_id, ra.width, ra.height, {}};
    for (std::size_t j = 0; j < pa.annotations.size(); ++j) {
      if (pa.annotations[j].is_box() && ra.annotations[j].is_box()) {
        pf.annotations.push_back(pa.annotations[j]);
        rf.annotations.push_back(ra.annotations[j]);
      }
    }
    produced.images.push_back(std::move(pf));
    ref.images.push_back(std::move(rf));
  }
  report["quality_fraction"] = box_quality(produced, ref);

  result.report_json = report.dump(2) + "\n";
  return result;
}

}  // namespace stbox
