#include <doctest.h>

#include <random>

#include "tweetscape/geoproject.hpp"

using namespace tweetscape;

TEST_CASE("scene dimensions") {
  SUBCASE("one degree square at the equator") {
    const auto dims = scene_dimensions(GeoBounds::from_corners(0, 0, 1, 1));
    CHECK(dims.depth_m == doctest::Approx(111194.92664455874).epsilon(1e-12));
    // cos(0.5 deg) ~ 0.99996: equal to four significant figures
    CHECK(dims.width_m == doctest::Approx(111195.0).epsilon(1e-4));
  }
  SUBCASE("micro-degree bounds linearize") {
    const auto dims = scene_dimensions(GeoBounds::from_corners(0, 0, 0.000001, 0.000001));
    CHECK(dims.depth_m == doctest::Approx(0.11119492664455874).epsilon(1e-9));
    CHECK(dims.width_m == doctest::Approx(0.11119492664455874).epsilon(1e-9));
  }
  SUBCASE("cambridge reference frame") {
    // Frozen from an independent evaluation of the sizing formula (Python, math.radians).
    const auto frame = SceneFrame::from_bounds(cambridge_bounds());
    CHECK(frame.depth_m == doctest::Approx(778.3644865116773).epsilon(1e-12));
    CHECK(frame.width_m == doctest::Approx(739.5598053056852).epsilon(1e-12));
  }
  SUBCASE("float scalar instantiation") {
    const auto dims = scene_dimensions(GeoBoundsT<float>::from_corners(42.350f, -71.090f, 42.357f, -71.099f));
    CHECK(dims.depth_m == doctest::Approx(778.36).epsilon(1e-3));
  }
}

TEST_CASE("bounds normalize and validate") {
  const auto b = cambridge_bounds();
  CHECK(b.min_lon == -71.099);
  CHECK(b.max_lon == -71.090);
  CHECK_THROWS_AS(GeoBounds::from_corners(1, 1, 1, 2), DomainError);
  CHECK_THROWS_AS(GeoBounds::from_corners(-91, 0, 0, 1), DomainError);
  CHECK_THROWS_AS(GeoBounds::from_corners(0, 0, 1, 181), DomainError);
}

TEST_CASE("projection corners and midpoint") {
  const auto frame = SceneFrame::from_bounds(cambridge_bounds());
  const auto& b = frame.bounds;
  CHECK(project(b.min_lat, b.min_lon, frame) == ScenePoint(0, 0, 0));
  CHECK(project(b.max_lat, b.max_lon, frame) == ScenePoint(frame.width_m, frame.depth_m, 0));
  const auto mid = project((b.min_lat + b.max_lat) / 2, (b.min_lon + b.max_lon) / 2, frame);
  CHECK(std::abs(mid.x() - frame.width_m / 2) <= 1e-9 * frame.width_m);
  CHECK(std::abs(mid.y() - frame.depth_m / 2) <= 1e-9 * frame.depth_m);

  const auto sw = unproject(0.0, 0.0, frame);
  CHECK(sw.lat == b.min_lat);
  CHECK(sw.lon == b.min_lon);
  const auto ne = unproject(frame.width_m, frame.depth_m, frame);
  CHECK(ne.lat == b.max_lat);
  CHECK(ne.lon == b.max_lon);
}

TEST_CASE("out-of-bounds inputs name the violated bound") {
  const auto frame = SceneFrame::from_bounds(cambridge_bounds());
  try {
    project(42.36, -71.095, frame);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("latitude") != std::string::npos);
    CHECK(std::string(e.what()).find("max_lat") != std::string::npos);
  }
  try {
    project(42.352, -71.2, frame);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("min_lon") != std::string::npos);
  }
  CHECK_THROWS_AS(unproject(-0.1, 1.0, frame), DomainError);
  CHECK_THROWS_AS(unproject(1.0, frame.depth_m + 1.0, frame), DomainError);
}

TEST_CASE("properties over random in-bounds points") {
  const auto frame = SceneFrame::from_bounds(cambridge_bounds());
  const auto& b = frame.bounds;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(b.min_lat, b.max_lat), lon(b.min_lon, b.max_lon);
  for (int i = 0; i < 10000; ++i) {
    const double la1 = lat(rng), lo1 = lon(rng), la2 = lat(rng), lo2 = lon(rng);
    const auto p1 = project(la1, lo1, frame), p2 = project(la2, lo2, frame);

    const auto back = unproject(p1.x(), p1.y(), frame);
    REQUIRE(std::abs(back.lat - la1) < 1e-9);
    REQUIRE(std::abs(back.lon - lo1) < 1e-9);

    if (la1 < la2) REQUIRE(p1.y() < p2.y());
    if (lo1 < lo2) REQUIRE(p1.x() < p2.x());

    const auto pm = project((la1 + la2) / 2, (lo1 + lo2) / 2, frame);
    REQUIRE((pm - (p1 + p2) / 2).norm() <= 1e-9);
  }
}
