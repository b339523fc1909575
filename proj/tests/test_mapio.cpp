#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "areagraph/error.hpp"
#include "areagraph/mapio.hpp"
#include "support.hpp"

using namespace areagraph;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  const fs::path d = fs::temp_directory_path() / "areagraph_tests" / name;
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_SUITE("mapio") {
  TEST_CASE("gray values are classified with map_server thresholds") {
    GrayImage img{4, 1, {0, 254, 205, 100}};
    MapMetadata meta;
    meta.resolution = 0.05;
    const GridMap m = classify_image(img, meta);
    CHECK(m.at(0, 0) == Occupancy::Occupied);  // p = 1
    CHECK(m.at(1, 0) == Occupancy::Free);      // p = 1/255
    CHECK(m.at(2, 0) == Occupancy::Unknown);   // p = 50/255 sits just above 0.196
    CHECK(m.at(3, 0) == Occupancy::Unknown);   // p = 0.608

    meta.negate = true;
    const GridMap n = classify_image(img, meta);
    CHECK(n.at(0, 0) == Occupancy::Free);
    CHECK(n.at(1, 0) == Occupancy::Occupied);
  }

  TEST_CASE("top image row becomes the highest map row") {
    GrayImage img{2, 2, {0, 254, 254, 254}};
    MapMetadata meta;
    meta.resolution = 0.1;
    const GridMap m = classify_image(img, meta);
    CHECK(m.at(0, 1) == Occupancy::Occupied);
    CHECK(m.at(0, 0) == Occupancy::Free);
    CHECK(m.count(Occupancy::Occupied) == 1);
  }

  TEST_CASE("pixel and world frames") {
    const GridMap m(20, 10, 0.1, Pose2{-1.0, 2.0, 0.0});
    const Point2 w = m.pixel_to_world({10.0, 5.0});
    CHECK(w.x == doctest::Approx(0.0));
    CHECK(w.y == doctest::Approx(2.5));
    const Point2 back = m.world_to_pixel(w);
    CHECK(back.x == doctest::Approx(10.0));
    CHECK(back.y == doctest::Approx(5.0));
    const Point2 o = m.pixel_to_world({0.0, 0.0});
    CHECK(o.x == doctest::Approx(-1.0));
    CHECK(o.y == doctest::Approx(2.0));
  }

  TEST_CASE("save and load round trip") {
    GridMap m(7, 5, 0.05, Pose2{1.5, -2.0, 0.0});
    m.set(0, 0, Occupancy::Occupied);
    m.set(6, 4, Occupancy::Unknown);
    m.set(3, 2, Occupancy::Occupied);
    const fs::path stem = scratch_dir("roundtrip") / "m";
    save_grid_map(stem, m);
    fs::path yaml = stem;
    yaml += ".yaml";
    const GridMap back = load_grid_map(yaml);
    CHECK(back == m);
  }

  TEST_CASE("metadata errors") {
    CHECK_THROWS_AS(load_map_metadata("/nonexistent/map.yaml"), IoError);
    const fs::path bad = scratch_dir("meta") / "bad.yaml";
    std::ofstream(bad) << "image: x.pgm\nresolution: -1\norigin: [0, 0, 0]\n";
    CHECK_THROWS_AS(load_map_metadata(bad), InvalidArgument);
  }

  TEST_CASE("sites are occupied cell centers") {
    const GridMap m = testsupport::box_map(5, 4);
    const SiteSet s = extract_sites(m);
    CHECK(s.sites.size() == m.count(Occupancy::Occupied));
    for (Point2 p : s.sites) {
      const int c = static_cast<int>(p.x);
      const int r = static_cast<int>(p.y);
      CHECK(p.x == doctest::Approx(c + 0.5));
      CHECK(m.at(c, r) == Occupancy::Occupied);
    }
    CHECK(s.width == 5);
    CHECK(s.height == 4);
    CHECK_THROWS_AS(extract_sites(GridMap(3, 3, 0.05)), DegenerateInput);
  }

  TEST_CASE("meters to pixels") {
    CHECK(meters_to_pixels(1.64, 0.05) == doctest::Approx(32.8));
    CHECK_THROWS_AS(meters_to_pixels(1.0, 0.0), InvalidArgument);
  }
}
