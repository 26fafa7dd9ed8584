#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stbox/geometry.hpp"

namespace stbox {

/// One labelled object: a box (well-labelled) or a point (weakly-labelled).
struct Annotation {
  int class_id = 0;
  std::variant<CenterBox, PointAnnotation> geometry;
  /// Provenance tag set by the selection stage ("prediction" or "st_box").
  std::optional<std::string> source;

  bool is_box() const { return std::holds_alternative<CenterBox>(geometry); }
  bool is_point() const { return std::holds_alternative<PointAnnotation>(geometry); }
  const CenterBox& box() const { return std::get<CenterBox>(geometry); }
  const PointAnnotation& point() const { return std::get<PointAnnotation>(geometry); }
};

struct ImageRecord {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<Annotation> annotations;
};

struct Dataset {
  std::vector<ImageRecord> images;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the annotation JSON schema. Throws ParseError with a field path
/// on malformed input; warns on stderr when geometry overflows the image.
Dataset load_dataset(const std::string& path);
Dataset parse_dataset(const std::string& json_text, const std::string& origin = "<string>");

std::string dataset_to_json(const Dataset& ds);
/// Atomic write (temp file + rename).
void save_dataset(const Dataset& ds, const std::string& path);

/// Collects (w, h) of all box annotations with the given class id,
/// in dataset order.
std::vector<std::pair<double, double>> box_sizes(const Dataset& ds, int class_id);

/// Sorted distinct class ids present among box annotations.
std::vector<int> box_class_ids(const Dataset& ds);

void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace stbox
