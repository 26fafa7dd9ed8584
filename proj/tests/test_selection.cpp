#include <doctest.h>

#include <cmath>

#include "stbox/selection.hpp"

using namespace stbox;

TEST_CASE("score at zero distance equals the confidence") {
  const Prediction p{{10, 10, 4, 4}, 0.5};
  CHECK(score(p, {10, 10}) == doctest::Approx(0.5));
}

TEST_CASE("score at unit distance decays by e") {
  const Prediction p{{10, 11, 4, 4}, 1.0};
  CHECK(score(p, {10, 10}) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("score decays with the squared pixel distance") {
  const Prediction p{{13, 14, 4, 4}, 1.0};  // distance 5
  CHECK(score(p, {10, 10}) == doctest::Approx(std::exp(-25.0)));
}

TEST_CASE("score is monotone in distance and confidence breaks equidistant ties") {
  const PointAnnotation point{0, 0};
  double prev = 1.0;
  for (double d = 0.25; d <= 3.0; d += 0.25) {
    const double s = score({{d, 0, 4, 4}, 1.0}, point);
    CHECK(s < prev);
    prev = s;
  }
  const Prediction low{{1, 0, 4, 4}, 0.4};
  const Prediction high{{0, 1, 4, 4}, 0.9};
  CHECK(score(high, point) > score(low, point));
}

TEST_CASE("select_box returns the ST box when no predictions exist") {
  const CenterBox st{10, 10, 30, 30};
  const CenterBox out = select_box({10, 10}, st, {});
  CHECK(out.cx == st.cx);
  CHECK(out.w == st.w);
}

TEST_CASE("select_box keeps a credible prediction") {
  const CenterBox st{10, 10, 30, 30};
  const Prediction good{{10, 10, 28, 28}, 0.9};  // high IOU, centered at the point
  const Selected sel = select_box_tagged({10, 10}, st, {good});
  CHECK(sel.from_prediction);
  CHECK(sel.box.w == 28.0);
}

TEST_CASE("select_box prefers the closer center over higher confidence") {
  const CenterBox st{10, 10, 30, 30};
  const Prediction d1{{10, 10, 30, 30}, 0.5};          // s = 0.5
  const Prediction d2{{10, 11, 30, 30}, 0.9};          // s = 0.9 e^-1 ~ 0.331
  const Selected sel = select_box_tagged({10, 10}, st, {d1, d2});
  CHECK(sel.from_prediction);
  CHECK(sel.box.cy == 10.0);
}

TEST_CASE("select_box filters low confidence") {
  const CenterBox st{10, 10, 30, 30};
  const Prediction weak{{10, 10, 30, 30}, 0.15};  // below tau_s = 0.2
  const Selected sel = select_box_tagged({10, 10}, st, {weak});
  CHECK_FALSE(sel.from_prediction);
}

TEST_CASE("select_box filters low overlap") {
  const CenterBox st{10, 10, 30, 30};
  const Prediction off{{100, 100, 30, 30}, 0.99};
  const Selected sel = select_box_tagged({10, 10}, st, {off});
  CHECK_FALSE(sel.from_prediction);
}

TEST_CASE("select_box output always passes the filters or is the ST box") {
  const CenterBox st{10, 10, 30, 30};
  const SelectionConfig config;
  const std::vector<Prediction> preds = {{{12, 9, 26, 31}, 0.4},
                                         {{8, 11, 35, 29}, 0.7},
                                         {{60, 60, 30, 30}, 0.9},
                                         {{10, 10, 30, 30}, 0.1}};
  const Selected sel = select_box_tagged({10, 10}, st, preds, config);
  if (sel.from_prediction) {
    CHECK(iou(st, sel.box) >= config.tau_iou);
  } else {
    CHECK(sel.box.w == st.w);
  }
}

TEST_CASE("anchor assignment thresholds") {
  const std::vector<CenterBox> targets = {{50, 50, 10, 10}};
  SUBCASE("identical anchor is foreground") {
    const auto labels = assign_anchors({{50, 50, 10, 10}}, targets);
    REQUIRE(labels.size() == 1);
    REQUIRE(std::holds_alternative<Foreground>(labels[0]));
    CHECK(std::get<Foreground>(labels[0]).target_index == 0);
  }
  SUBCASE("disjoint anchor is background") {
    const auto labels = assign_anchors({{500, 500, 10, 10}}, targets);
    CHECK(std::holds_alternative<Background>(labels[0]));
  }
  SUBCASE("max IOU 0.45 is ignored") {
    const auto labels = assign_anchors({{50, 50, 10.0 / 0.45, 10}}, targets);
    CHECK(std::holds_alternative<Ignore>(labels[0]));
  }
  SUBCASE("no targets means all background") {
    const auto labels = assign_anchors({{50, 50, 10, 10}, {1, 1, 2, 2}}, {});
    for (const auto& l : labels) CHECK(std::holds_alternative<Background>(l));
  }
}

TEST_CASE("anchor assignment picks the first maximal target") {
  const std::vector<CenterBox> targets = {{50, 50, 10, 10}, {50, 50, 10, 10}};
  const auto labels = assign_anchors({{50, 50, 10, 10}}, targets);
  CHECK(std::get<Foreground>(labels[0]).target_index == 0);
}

TEST_CASE("beta arithmetic") {
  CHECK(beta(0.0, 500.0) == 0.0);
  CHECK(beta(10.0, 100.0) == doctest::Approx(1.0));
  CHECK(beta(10.0, 324.0) == doctest::Approx(10.0 / 18.0));
  CHECK_THROWS_AS(beta(10.0, 0.0), std::invalid_argument);
}

TEST_CASE("regression loss fixtures") {
  LossBatch batch;
  batch.box_items.push_back({{1, 1, 1, 1}, {0, 0, 0, 0}});
  CHECK(regression_loss(batch) == doctest::Approx(4.0));

  LossBatch points;
  points.point_items.push_back({{2, 0}, {0, 0}, 100.0});
  points.alpha = 0.0;
  CHECK(regression_loss(points) == doctest::Approx(2.0));
  points.alpha = 10.0;  // beta = 1, halves the term
  CHECK(regression_loss(points) == doctest::Approx(1.0));
}

TEST_CASE("regression loss rejects an empty batch") {
  CHECK_THROWS_AS(regression_loss({}), std::invalid_argument);
}

TEST_CASE("regression loss is non-increasing in alpha") {
  LossBatch batch;
  batch.box_items.push_back({{0.5, -1, 2, 0}, {0, 0, 0, 0}});
  batch.point_items.push_back({{2, 1}, {0, 0}, 100.0});
  batch.point_items.push_back({{-1, 3}, {0, 1}, 2500.0});
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha = 0.0; alpha <= 50.0; alpha += 5.0) {
    batch.alpha = alpha;
    const double loss = regression_loss(batch);
    CHECK(loss >= 0.0);
    CHECK(loss <= prev);
    prev = loss;
  }
}
