#include "stbox/annotations.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace stbox {

using nlohmann::json;

namespace {

void warn_if_outside(const ImageRecord& img, const Annotation& ann, std::size_t index) {
  double x0, y0, x1, y1;
  if (ann.is_box()) {
    const auto& b = ann.box();
    x0 = b.left();
    y0 = b.top();
    x1 = b.right();
    y1 = b.bottom();
  } else {
    const auto& p = ann.point();
    x0 = x1 = p.px;
    y0 = y1 = p.py;
  }
  if (x0 < 0.0 || y0 < 0.0 || x1 > img.width || y1 > img.height) {
    std::cerr << "warning: image " << img.image_id << " annotation " << index
              << " extends outside [0," << img.width << "]x[0," << img.height << "]\n";
  }
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

}  // namespace

Dataset parse_dataset(const std::string& json_text, const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("images") || !root["images"].is_array())
    throw ParseError(origin + ": expected top-level object with an \"images\" array");

  Dataset ds;
  std::set<std::string> seen_ids;
  std::size_t img_idx = 0;
  for (const auto& jimg : root["images"]) {
    const std::string where = origin + ": images[" + std::to_string(img_idx) + "]";
    if (!jimg.is_object()) throw ParseError(where + ": expected an object");
    ImageRecord img;
    if (!jimg.contains("id") || !jimg["id"].is_string())
      throw ParseError(where + ".id: expected a string");
    img.image_id = jimg["id"].get<std::string>();
    if (!seen_ids.insert(img.image_id).second)
      throw ParseError(where + ".id: duplicate image id \"" + img.image_id + "\"");
    if (!jimg.contains("width") || !jimg["width"].is_number_integer() ||
        jimg["width"].get<int>() <= 0)
      throw ParseError(where + ".width: expected a positive integer");
    if (!jimg.contains("height") || !jimg["height"].is_number_integer() ||
        jimg["height"].get<int>() <= 0)
      throw ParseError(where + ".height: expected a positive integer");
    img.width = jimg["width"].get<int>();
    img.height = jimg["height"].get<int>();

    std::size_t ann_idx = 0;
    for (const auto& jann : jimg.value("annotations", json::array())) {
      const std::string awhere = where + ".annotations[" + std::to_string(ann_idx) + "]";
      Annotation ann;
      if (!jann.contains("class") || !jann["class"].is_number_integer() ||
          jann["class"].get<int>() < 0)
        throw ParseError(awhere + ".class: expected a non-negative integer");
      ann.class_id = jann["class"].get<int>();
      const bool has_box = jann.contains("bbox");
      const bool has_point = jann.contains("point");
      if (has_box == has_point)
        throw ParseError(awhere + ": exactly one of \"bbox\" or \"point\" required");
      if (has_box) {
        const auto& jb = jann["bbox"];
        if (!jb.is_array() || jb.size() != 4)
          throw ParseError(awhere + ".bbox: expected [cx, cy, w, h]");
        CenterBox b{number_at(jb[0], awhere + ".bbox[0]"), number_at(jb[1], awhere + ".bbox[1]"),
                    number_at(jb[2], awhere + ".bbox[2]"), number_at(jb[3], awhere + ".bbox[3]")};
        try {
          b.validate();
        } catch (const std::invalid_argument& e) {
          throw ParseError(awhere + ".bbox: " + e.what());
        }
        ann.geometry = b;
      } else {
        const auto& jp = jann["point"];
        if (!jp.is_array() || jp.size() != 2)
          throw ParseError(awhere + ".point: expected [px, py]");
        PointAnnotation p{number_at(jp[0], awhere + ".point[0]"),
                          number_at(jp[1], awhere + ".point[1]")};
        try {
          p.validate();
        } catch (const std::invalid_argument& e) {
          throw ParseError(awhere + ".point: " + e.what());
        }
        ann.geometry = p;
      }
      if (jann.contains("source") && jann["source"].is_string())
        ann.source = jann["source"].get<std::string>();
      warn_if_outside(img, ann, ann_idx);
      img.annotations.push_back(std::move(ann));
      ++ann_idx;
    }
    ds.images.push_back(std::move(img));
    ++img_idx;
  }
  return ds;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), path);
}

std::string dataset_to_json(const Dataset& ds) {
  json jimages = json::array();
  for (const auto& img : ds.images) {
    json janns = json::array();
    for (const auto& ann : img.annotations) {
      json jann;
      jann["class"] = ann.class_id;
      if (ann.is_box()) {
        const auto& b = ann.box();
        jann["bbox"] = {b.cx, b.cy, b.w, b.h};
      } else {
        const auto& p = ann.point();
        jann["point"] = {p.px, p.py};
      }
      if (ann.source) jann["source"] = *ann.source;
      janns.push_back(std::move(jann));
    }
    jimages.push_back({{"id", img.image_id},
                       {"width", img.width},
                       {"height", img.height},
                       {"annotations", std::move(janns)}});
  }
  return json{{"images", std::move(jimages)}}.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(tmp + ": cannot open for writing");
    out << content;
    if (!out) throw std::runtime_error(tmp + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

void save_dataset(const Dataset& ds, const std::string& path) {
  write_file_atomic(path, dataset_to_json(ds));
}

std::vector<std::pair<double, double>> box_sizes(const Dataset& ds, int class_id) {
  std::vector<std::pair<double, double>> sizes;
  for (const auto& img : ds.images)
    for (const auto& ann : img.annotations)
      if (ann.class_id == class_id && ann.is_box())
        sizes.emplace_back(ann.box().w, ann.box().h);
  return sizes;
}

std::vector<int> box_class_ids(const Dataset& ds) {
  std::set<int> ids;
  for (const auto& img : ds.images)
    for (const auto& ann : img.annotations)
      if (ann.is_box()) ids.insert(ann.class_id);
  return {ids.begin(), ids.end()};
}

}  // namespace stbox
