#include <doctest.h>

#include <cmath>

#include "courtprior/roi.hpp"
#include "courtprior/rng.hpp"

using namespace courtprior;

namespace {

CourtRegion region_with_crop(const Rect& crop) {
  const Polygon hull({{static_cast<double>(crop.x), static_cast<double>(crop.y)},
                      {static_cast<double>(crop.right()), static_cast<double>(crop.y)},
                      {static_cast<double>(crop.right()), static_cast<double>(crop.bottom())},
                      {static_cast<double>(crop.x), static_cast<double>(crop.bottom())}});
  return CourtRegion{hull, crop, crop, shrink_toward_centroid(hull, 0.9), 0.2, false};
}

} // namespace

TEST_SUITE("roi") {

TEST_CASE("crop already below max_side passes through unscaled") {
  const Raster img(800, 600, 3, 42);
  const auto [roi, t] = make_roi(img, region_with_crop(Rect{100, 50, 400, 300}), 1000);
  CHECK(roi.width() == 400);
  CHECK(roi.height() == 300);
  CHECK(t.scale_x == 1.0);
  CHECK(t.scale_y == 1.0);
  CHECK(t.crop == Rect{100, 50, 400, 300});
}

TEST_CASE("oversized crop downscales to max_side") {
  const Raster img(2200, 1200, 3, 7);
  const auto [roi, t] = make_roi(img, region_with_crop(Rect{100, 100, 2000, 1000}), 1000);
  CHECK(roi.width() == 1000);
  CHECK(roi.height() == 500);
  CHECK(t.scale_x == doctest::Approx(0.5));
  CHECK(t.scale_y == doctest::Approx(0.5));
}

TEST_CASE("roi pixel (0,0) matches the crop origin at scale 1") {
  Raster img(300, 200, 3, 0);
  img.at(40, 30, 0) = 201;
  const auto [roi, t] = make_roi(img, region_with_crop(Rect{40, 30, 100, 100}), 500);
  CHECK(roi.at(0, 0, 0) == 201);
}

TEST_CASE("map_back with the identity transform is the identity") {
  RoiTransform t;
  t.crop = Rect{0, 0, 100, 100};
  Detection d;
  d.bbox = {10, 20, 30, 40};
  d.segmentation = {{10, 20, 40, 20, 40, 60}};
  d.score = 0.5;
  const Detection back = map_back(d, t);
  CHECK(back.bbox == d.bbox);
  CHECK(back.segmentation == d.segmentation);
  CHECK(back.score == 0.5);
}

TEST_CASE("map_back arithmetic example") {
  RoiTransform t;
  t.crop = Rect{100, 50, 400, 300};
  t.scale_x = 0.5;
  t.scale_y = 0.5;
  Detection d;
  d.bbox = {10, 10, 20, 20};
  const Detection back = map_back(d, t);
  CHECK(back.bbox == std::array<double, 4>{120, 70, 40, 40});
}

TEST_CASE("forward-inverse round trip stays under half a pixel") {
  RngStream rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Rect crop{static_cast<int>(rng.uniform_int(0, 200)),
                    static_cast<int>(rng.uniform_int(0, 150)),
                    static_cast<int>(rng.uniform_int(300, 2200)),
                    static_cast<int>(rng.uniform_int(300, 1200))};
    const Raster img(crop.right() + 10, crop.bottom() + 10, 1, 0);
    const auto [roi, t] = make_roi(img, region_with_crop(crop), 900);

    for (int i = 0; i < 50; ++i) {
      Detection d;
      const double x = rng.uniform(0.0, t.roi_w - 1.0);
      const double y = rng.uniform(0.0, t.roi_h - 1.0);
      d.bbox = {x, y, rng.uniform(1.0, t.roi_w - x), rng.uniform(1.0, t.roi_h - y)};
      d.segmentation = {{x, y, x + 1, y, x + 1, y + 1}};
      const Detection orig = map_back(d, t);
      // Forward again.
      const Vec2 p0 = roi_forward({orig.bbox[0], orig.bbox[1]}, t);
      CHECK(std::abs(p0.x - d.bbox[0]) < 0.5);
      CHECK(std::abs(p0.y - d.bbox[1]) < 0.5);
      const Vec2 v0 = roi_forward({orig.segmentation[0][0], orig.segmentation[0][1]}, t);
      CHECK(std::abs(v0.x - d.segmentation[0][0]) < 0.5);
      CHECK(std::abs(v0.y - d.segmentation[0][1]) < 0.5);
    }
  }
}

TEST_CASE("empty crop propagates") {
  const Raster img(100, 100, 3, 0);
  CHECK_THROWS_AS(make_roi(img, region_with_crop(Rect{200, 200, 50, 50}), 100), EmptyCrop);
}

TEST_CASE("transforms json round trip") {
  std::vector<RoiRecord> records;
  RoiRecord r;
  r.image_id = 5;
  r.file_name = "img5.png";
  r.transform.crop = Rect{10, 20, 300, 200};
  r.transform.scale_x = 0.75;
  r.transform.scale_y = 0.8;
  r.transform.original_w = 640;
  r.transform.original_h = 480;
  r.transform.roi_w = 225;
  r.transform.roi_h = 160;
  records.push_back(r);
  const auto back = parse_roi_transforms(serialize_roi_transforms(records));
  REQUIRE(back.size() == 1);
  CHECK(back[0].image_id == 5);
  CHECK(back[0].transform.crop == r.transform.crop);
  CHECK(back[0].transform.scale_x == r.transform.scale_x);
  CHECK(back[0].transform.roi_h == 160);
}

TEST_CASE("detections jsonl round trip and errors") {
  Detection d;
  d.image_id = 3;
  d.bbox = {1.5, 2.5, 10.0, 12.0};
  d.segmentation = {{1.5, 2.5, 11.5, 2.5, 11.5, 14.5}};
  d.score = 0.875;
  d.category_id = 2;
  const Detection back = detection_from_json_line(detection_to_json_line(d), 1);
  CHECK(back.image_id == 3);
  CHECK(back.bbox == d.bbox);
  CHECK(back.segmentation == d.segmentation);
  CHECK(back.score == 0.875);
  CHECK(back.category_id == 2);
  CHECK_THROWS_AS(detection_from_json_line("{not json", 7), SchemaError);
  CHECK_THROWS_AS(detection_from_json_line(R"({"bbox": [1,2,3,4]})", 9), SchemaError);
}

} // TEST_SUITE
