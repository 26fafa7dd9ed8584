#include <doctest.h>

#include "stbox/annotations.hpp"
#include "test_util.hpp"

using namespace stbox;

namespace {

bool structurally_equal(const Dataset& a, const Dataset& b) {
  if (a.images.size() != b.images.size()) return false;
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    const auto& x = a.images[i];
    const auto& y = b.images[i];
    if (x.image_id != y.image_id || x.width != y.width || x.height != y.height) return false;
    if (x.annotations.size() != y.annotations.size()) return false;
    for (std::size_t j = 0; j < x.annotations.size(); ++j) {
      const auto& p = x.annotations[j];
      const auto& q = y.annotations[j];
      if (p.class_id != q.class_id || p.is_box() != q.is_box() || p.source != q.source)
        return false;
      if (p.is_box()) {
        if (p.box().cx != q.box().cx || p.box().cy != q.box().cy || p.box().w != q.box().w ||
            p.box().h != q.box().h)
          return false;
      } else if (p.point().px != q.point().px || p.point().py != q.point().py) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("annotation files round-trip") {
  Dataset ds = testutil::synthetic_dataset(20, 1);
  // Mix in points and provenance tags.
  ds.images[0].annotations.push_back({2, PointAnnotation{12.5, 99.25}, std::nullopt});
  ds.images[1].annotations.push_back({2, PointAnnotation{1, 2}, std::string("st_box")});
  const Dataset parsed = parse_dataset(dataset_to_json(ds));
  CHECK(structurally_equal(ds, parsed));
  // Second generation is byte-identical.
  CHECK(dataset_to_json(parsed) == dataset_to_json(ds));
}

TEST_CASE("parser accepts mixed boxes and points in one image") {
  const char* text = R"({"images": [{"id": "a", "width": 100, "height": 100,
    "annotations": [{"class": 0, "bbox": [50, 50, 10, 10]},
                    {"class": 1, "point": [30, 40]}]}]})";
  const Dataset ds = parse_dataset(text);
  REQUIRE(ds.images.size() == 1);
  CHECK(ds.images[0].annotations[0].is_box());
  CHECK(ds.images[0].annotations[1].is_point());
}

TEST_CASE("parser diagnostics carry the field path") {
  CHECK_THROWS_AS(parse_dataset("not json"), ParseError);
  CHECK_THROWS_AS(parse_dataset(R"({"images": [{"id": "a"}]})"), ParseError);
  // both geometries present
  CHECK_THROWS_AS(parse_dataset(R"({"images": [{"id": "a", "width": 10, "height": 10,
    "annotations": [{"class": 0, "bbox": [1,1,1,1], "point": [1,1]}]}]})"),
                  ParseError);
  // duplicate image id
  CHECK_THROWS_AS(parse_dataset(R"({"images": [
    {"id": "a", "width": 10, "height": 10, "annotations": []},
    {"id": "a", "width": 10, "height": 10, "annotations": []}]})"),
                  ParseError);
  // non-positive box size
  CHECK_THROWS_AS(parse_dataset(R"({"images": [{"id": "a", "width": 10, "height": 10,
    "annotations": [{"class": 0, "bbox": [1,1,0,1]}]}]})"),
                  ParseError);
  // negative class
  CHECK_THROWS_AS(parse_dataset(R"({"images": [{"id": "a", "width": 10, "height": 10,
    "annotations": [{"class": -1, "bbox": [1,1,1,1]}]}]})"),
                  ParseError);
}

TEST_CASE("box_sizes filters by class in dataset order") {
  const char* text = R"({"images": [
    {"id": "a", "width": 100, "height": 100, "annotations": [
      {"class": 0, "bbox": [50, 50, 10, 12]},
      {"class": 1, "bbox": [50, 50, 20, 22]},
      {"class": 0, "point": [5, 5]}]},
    {"id": "b", "width": 100, "height": 100, "annotations": [
      {"class": 0, "bbox": [50, 50, 14, 16]}]}]})";
  const Dataset ds = parse_dataset(text);
  const auto sizes = box_sizes(ds, 0);
  REQUIRE(sizes.size() == 2);
  CHECK(sizes[0] == std::pair<double, double>{10, 12});
  CHECK(sizes[1] == std::pair<double, double>{14, 16});
  CHECK(box_class_ids(ds) == std::vector<int>{0, 1});
}
