// Command-line front end: file-in, file-out tooling around box-size priors,
// stochastic boxes, point-to-box selection, and annotation-budget analysis.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stbox/annotations.hpp"
#include "stbox/density.hpp"
#include "stbox/pipeline.hpp"
#include "stbox/selection.hpp"
#include "stbox/simulate.hpp"
#include "stbox/solver.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;

stbox::NoiseModel parse_noise_model(const std::string& spec) {
  if (spec == "default") return stbox::default_noise_model();
  if (spec == "none" || spec == "zero") return stbox::NoiseModel::zero();
  const std::string prefix = "custom:";
  if (spec.rfind(prefix, 0) == 0) {
    std::stringstream ss(spec.substr(prefix.size()));
    stbox::NoiseModel m;
    char c1 = 0, c2 = 0;
    if (ss >> m.slope >> c1 >> m.intercept >> c2 >> m.sigma && c1 == ',' && c2 == ',' &&
        m.sigma >= 0.0)
      return m;
  }
  throw CLI::ValidationError("--alpha-model",
                             "expected default, none, or custom:slope,intercept,sigma");
}

std::vector<double> parse_fractions(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<stbox::KlPoint> load_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw stbox::ParseError(path + ": cannot open file");
  std::vector<stbox::KlPoint> curve;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("fraction", 0) == 0) continue;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw stbox::ParseError(path + ":" + std::to_string(lineno) + ": expected fraction,kl");
    try {
      curve.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw stbox::ParseError(path + ":" + std::to_string(lineno) + ": expected fraction,kl");
    }
  }
  return curve;
}

std::string st_boxes_csv(const std::vector<std::tuple<int, stbox::StBox>>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "class,kind,w,h,objective\n";
  for (const auto& [cid, box] : rows)
    out << cid << ',' << stbox::stbox_kind_name(box.kind) << ',' << box.w << ',' << box.h << ','
        << box.objective_value << '\n';
  return out.str();
}

int cmd_fit_pdf(const std::string& input, const std::string& out_dir, int grid_size) {
  const stbox::Dataset ds = stbox::load_dataset(input);
  std::filesystem::create_directories(out_dir);
  for (int cid : stbox::box_class_ids(ds)) {
    const auto sizes = stbox::box_sizes(ds, cid);
    if (sizes.size() < 2) {
      std::cerr << "warning: insufficient samples for class " << cid << ", skipped\n";
      continue;
    }
    const stbox::ClassPrior prior = stbox::fit_prior(cid, sizes, grid_size);
    const std::string path = out_dir + "/class_" + std::to_string(cid) + "_pdf.csv";
    stbox::write_file_atomic(path, stbox::prior_to_csv(prior));
    std::cerr << "class " << cid << ": n=" << prior.n_samples << " mean=(" << prior.mean_w
              << "," << prior.mean_h << ") std=(" << prior.std_w << "," << prior.std_h
              << ") -> " << path << "\n";
  }
  return 0;
}

int cmd_st_boxes(const std::string& input, const std::string& out, bool mean_iou,
                 int grid_size) {
  const stbox::Dataset ds = stbox::load_dataset(input);
  std::vector<std::tuple<int, stbox::StBox>> rows;
  for (int cid : stbox::box_class_ids(ds)) {
    const auto sizes = stbox::box_sizes(ds, cid);
    if (sizes.size() < 2) {
      std::cerr << "warning: insufficient samples for class " << cid << ", skipped\n";
      continue;
    }
    const stbox::ClassPrior prior = stbox::fit_prior(cid, sizes, grid_size);
    if (mean_iou) {
      stbox::SolverStats stats;
      const stbox::StBox box = stbox::mean_iou_box(prior, {}, &stats);
      std::cerr << "class " << cid << ": mean_iou=(" << box.w << "," << box.h
                << ") objective=" << box.objective_value << " iterations=" << stats.iterations
                << " final_step=" << stats.final_step << " evaluations=" << stats.evaluations
                << "\n";
      rows.emplace_back(cid, box);
    } else {
      rows.emplace_back(cid, stbox::mean_box(prior));
    }
  }
  const std::string csv = st_boxes_csv(rows);
  if (out.empty())
    std::cout << csv;
  else
    stbox::write_file_atomic(out, csv);
  return 0;
}

int cmd_select(const std::string& input, const std::string& predictions_path,
               const std::string& out, double tau_s, double tau_iou, int grid_size) {
  stbox::Dataset ds = stbox::load_dataset(input);
  stbox::PredictionMap predictions;
  if (!predictions_path.empty()) predictions = stbox::load_predictions(predictions_path);
  const stbox::SelectionConfig config{tau_s, tau_iou};

  std::map<int, stbox::StBox> st_boxes;
  for (int cid : stbox::box_class_ids(ds)) {
    const auto sizes = stbox::box_sizes(ds, cid);
    if (sizes.size() < 2) continue;
    st_boxes.emplace(cid, stbox::mean_iou_box(stbox::fit_prior(cid, sizes, grid_size)));
  }

  for (auto& img : ds.images) {
    static const std::vector<stbox::Prediction> kNone;
    const auto pit = predictions.find(img.image_id);
    const auto& preds = pit != predictions.end() ? pit->second : kNone;
    for (auto& ann : img.annotations) {
      if (!ann.is_point()) continue;
      const auto it = st_boxes.find(ann.class_id);
      if (it == st_boxes.end()) {
        std::cerr << "warning: no prior for class " << ann.class_id << ", point kept\n";
        continue;
      }
      const stbox::PointAnnotation p = ann.point();
      const stbox::CenterBox st{p.px, p.py, it->second.w, it->second.h};
      const stbox::Selected sel = stbox::select_box_tagged(p, st, preds, config);
      ann.geometry = sel.box;
      ann.source = sel.from_prediction ? "prediction" : "st_box";
    }
  }
  stbox::save_dataset(ds, out);
  return 0;
}

int cmd_gen_points(const std::string& input, double well_fraction, const std::string& model_spec,
                   std::uint64_t seed, const std::string& out_well, const std::string& out_weak,
                   const std::string& out_reference) {
  const stbox::Dataset ds = stbox::load_dataset(input);
  const stbox::NoiseModel model = parse_noise_model(model_spec);
  auto [well, weak] = stbox::partition_dataset(ds, well_fraction, seed);
  const stbox::Dataset weakened = stbox::weaken(weak, model, seed);
  stbox::save_dataset(well, out_well);
  stbox::save_dataset(weakened, out_weak);
  if (!out_reference.empty()) stbox::save_dataset(weak, out_reference);
  std::cerr << "well: " << well.images.size() << " images, weak: " << weak.images.size()
            << " images\n";
  return 0;
}

int cmd_kl_curve(const std::string& input, int class_id, const std::string& fractions_csv,
                 std::uint64_t seed, const std::string& out) {
  const stbox::Dataset ds = stbox::load_dataset(input);
  const auto fractions = parse_fractions(fractions_csv);
  const auto curve = stbox::kl_curve(ds, class_id, fractions, seed);
  const std::string csv = stbox::kl_curve_to_csv(curve);
  if (out.empty())
    std::cout << csv;
  else
    stbox::write_file_atomic(out, csv);
  return 0;
}

int cmd_advise(const std::string& curve_path, double threshold) {
  const auto curve = load_curve_csv(curve_path);
  std::cout << stbox::advise_budget(curve, threshold) << "\n";
  return 0;
}

int cmd_eval_quality(const std::string& produced, const std::string& reference) {
  const double q =
      stbox::box_quality(stbox::load_dataset(produced), stbox::load_dataset(reference));
  std::cout << q << "\n";
  return 0;
}

int cmd_pipeline(const std::string& input, double well_fraction, double alpha,
                 std::uint64_t seed, const std::string& model_spec,
                 const std::string& predictions_path, const std::string& report_path,
                 const std::string& out_selected) {
  stbox::PipelineConfig config;
  config.well_fraction = well_fraction;
  config.alpha = alpha;
  config.seed = seed;
  config.noise = parse_noise_model(model_spec);
  std::optional<stbox::PredictionMap> predictions;
  if (!predictions_path.empty()) predictions = stbox::load_predictions(predictions_path);

  const stbox::PipelineResult result =
      stbox::run_pipeline(stbox::load_dataset(input), config, predictions);
  if (report_path.empty())
    std::cout << result.report_json;
  else
    stbox::write_file_atomic(report_path, result.report_json);
  if (!out_selected.empty()) stbox::save_dataset(result.selected, out_selected);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounding-box size priors, stochastic boxes, and point-to-box tooling"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string input, out, out_dir, predictions_path, reference_path, curve_path;
  std::string out_well, out_weak, out_reference, report_path, out_selected;
  std::string model_spec = "default";
  std::string fractions_csv = "0.05,0.1,0.2,0.3,0.4,0.5,1.0";
  int grid_size = 100;
  int class_id = 0;
  double well_fraction = 0.05;
  double tau_s = 0.2, tau_iou = 0.5;
  double alpha = 0.0, threshold = 0.05;
  std::uint64_t seed = 0;

  auto* fit = app.add_subcommand("fit-pdf", "Fit per-class joint (w, h) pdfs and export CSV");
  fit->add_option("--input", input)->required();
  fit->add_option("--out-dir", out_dir)->required();
  fit->add_option("--grid-size", grid_size);

  auto* mean = app.add_subcommand("mean-box", "Per-class mean ST boxes");
  mean->add_option("--input", input)->required();
  mean->add_option("--out", out);
  mean->add_option("--grid-size", grid_size);

  auto* miou = app.add_subcommand("mean-iou-box", "Per-class mean-IOU ST boxes");
  miou->add_option("--input", input)->required();
  miou->add_option("--out", out);
  miou->add_option("--grid-size", grid_size);

  auto* select = app.add_subcommand("select", "Replace points with selected boxes");
  select->add_option("--input", input)->required();
  select->add_option("--predictions", predictions_path);
  select->add_option("--out", out)->required();
  select->add_option("--tau-s", tau_s);
  select->add_option("--tau-iou", tau_iou);
  select->add_option("--grid-size", grid_size);

  auto* gen = app.add_subcommand("gen-points", "Partition and weaken a box-labelled dataset");
  gen->add_option("--input", input)->required();
  gen->add_option("--well-fraction", well_fraction)->required();
  gen->add_option("--alpha-model", model_spec);
  gen->add_option("--seed", seed);
  gen->add_option("--out-well", out_well)->required();
  gen->add_option("--out-weak", out_weak)->required();
  gen->add_option("--out-reference", out_reference);

  auto* klc = app.add_subcommand("kl-curve", "KL divergence vs annotated fraction");
  klc->add_option("--input", input)->required();
  klc->add_option("--class", class_id)->required();
  klc->add_option("--fractions", fractions_csv);
  klc->add_option("--seed", seed);
  klc->add_option("--out", out);

  auto* advise = app.add_subcommand("advise", "Smallest fraction whose KL is under threshold");
  advise->add_option("--curve", curve_path)->required();
  advise->add_option("--threshold", threshold);

  auto* quality = app.add_subcommand("eval-quality", "Fraction of boxes with IOU > 0.5");
  quality->add_option("--produced", input)->required();
  quality->add_option("--reference", reference_path)->required();

  auto* pipe = app.add_subcommand("pipeline", "Partition, weaken, fit, solve, select, score");
  pipe->add_option("--input", input)->required();
  pipe->add_option("--well-fraction", well_fraction)->required();
  pipe->add_option("--alpha", alpha);
  pipe->add_option("--seed", seed);
  pipe->add_option("--alpha-model", model_spec);
  pipe->add_option("--predictions", predictions_path);
  pipe->add_option("--report-json", report_path);
  pipe->add_option("--out-selected", out_selected);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) return cmd_fit_pdf(input, out_dir, grid_size);
    if (mean->parsed()) return cmd_st_boxes(input, out, false, grid_size);
    if (miou->parsed()) return cmd_st_boxes(input, out, true, grid_size);
    if (select->parsed())
      return cmd_select(input, predictions_path, out, tau_s, tau_iou, grid_size);
    if (gen->parsed())
      return cmd_gen_points(input, well_fraction, model_spec, seed, out_well, out_weak,
                            out_reference);
    if (klc->parsed()) return cmd_kl_curve(input, class_id, fractions_csv, seed, out);
    if (advise->parsed()) return cmd_advise(curve_path, threshold);
    if (quality->parsed()) return cmd_eval_quality(input, reference_path);
    if (pipe->parsed())
      return cmd_pipeline(input, well_fraction, alpha, seed, model_spec, predictions_path,
                          report_path, out_selected);
  } catch (const stbox::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const stbox::DegeneratePartition& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
