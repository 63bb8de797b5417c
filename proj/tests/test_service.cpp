#include <doctest.h>

#include <thread>

#include "support.hpp"
#include "tweetscape/service.hpp"

// After Eigen: <resolv.h> (via httplib) defines a `_res` macro.
#include <httplib.h>

using namespace tweetscape;

namespace {

const std::filesystem::path kFixtures = TWEETSCAPE_FIXTURE_DIR;

ApiResponse get(Service& s, const std::string& path, std::map<std::string, std::string> query = {}) {
  return s.handle({"GET", path, std::move(query), ""});
}

ApiResponse post(Service& s, const std::string& path, const std::string& body) {
  return s.handle({"POST", path, {}, body});
}

Json body_of(const ApiResponse& r) { return Json::parse(r.body); }

}  // namespace

TEST_CASE("config loading") {
  const auto cfg = ServiceConfig::load(kFixtures / "config.json");
  CHECK(cfg.dataset_path == kFixtures / "tiny.tsv");
  REQUIRE(cfg.heightmap_path);
  CHECK(*cfg.heightmap_path == kFixtures / "tiny_heightmap.asc");
  CHECK(cfg.bounds == cambridge_bounds());
  CHECK(cfg.wall.columns == 10);
  CHECK_THROWS_AS(ServiceConfig::load(kFixtures / "nope.json"), BootError);
  CHECK_THROWS_AS(ServiceConfig::from_json(Json{{"bounds", {{"min_lat", 1}}}}), BootError);
}

TEST_CASE("boot") {
  SUBCASE("fixture corpus answers health") {
    Service service(ServiceConfig::load(kFixtures / "config.json"));
    const auto r = get(service, "/health");
    CHECK(r.status == 200);
    CHECK(body_of(r) == Json{{"status", "ok"}});
    const auto snap = service.snapshot();
    CHECK(snap->dataset.records.size() == 9);
    CHECK(snap->dataset.skipped == 1);
    CHECK(snap->dataset.out_of_bounds == 1);
    CHECK(snap->placements.size() == 9);
    CHECK(snap->terrain_chunks.size() == 1);
  }
  SUBCASE("missing dataset names the ingest stage") {
    ServiceConfig cfg;
    cfg.dataset_path = kFixtures / "missing.tsv";
    try {
      Service service(cfg);
      FAIL("expected BootError");
    } catch (const BootError& e) {
      CHECK(std::string(e.what()).rfind("ingest: unreadable file", 0) == 0);
    }
  }
  SUBCASE("bad heightmap names the terrain stage") {
    testing::TempDir dir;
    ServiceConfig cfg;
    cfg.dataset_path = kFixtures / "tiny.tsv";
    cfg.heightmap_path = dir.write("bad.asc", "ncols 2\n");
    try {
      Service service(cfg);
      FAIL("expected BootError");
    } catch (const BootError& e) {
      CHECK(std::string(e.what()).rfind("terrain:", 0) == 0);
    }
  }
  SUBCASE("no heightmap means flat ground and no chunks") {
    ServiceConfig cfg;
    cfg.dataset_path = kFixtures / "tiny.tsv";
    Service service(cfg);
    CHECK(body_of(get(service, "/terrain")) == Json{{"chunks", Json::array()}});
    const auto snap = service.snapshot();
    for (const auto& p : snap->placements) {
      CHECK(p.position.z() == doctest::Approx(cfg.stack.ground_offset_m +
                                              static_cast<double>(p.stack_index) * cfg.stack.marker_height_m));
    }
  }
}

TEST_CASE("routes") {
  Service service(ServiceConfig::load(kFixtures / "config.json"));
  const auto snap = service.snapshot();
  const auto& ds = snap->dataset;

  SUBCASE("record detail") {
    const auto r = get(service, "/tweets/t03");
    REQUIRE(r.status == 200);
    const auto j = body_of(r);
    CHECK(j["username"] == "night_owl");
    CHECK(j["follower_count"] == 301);
    CHECK(j["timestamp"] == "2013-10-11T23:41:10.000Z");
    CHECK(j["text"] == "danger: icy steps by the dorm");
    CHECK(j["lat"] == 42.3537);
    CHECK(j["lon"] == -71.0972);
    CHECK(j["tags"] == Json::array({"skull"}));
    CHECK(get(service, "/tweets/t99").status == 404);
  }
  SUBCASE("skull model class from the danger rule") {
    const auto j = body_of(get(service, "/tweets"));
    std::map<std::string, std::string> cls;
    for (const auto& p : j["placements"]) cls[p["record_id"]] = p["model_class"];
    CHECK(cls["t03"] == "skull");
    CHECK(cls["t07"] == "skull");
    CHECK(cls["t01"] == "bird");
  }
  SUBCASE("dining hall stack") {
    const auto j = body_of(get(service, "/tweets"));
    std::map<std::string, std::size_t> idx;
    for (const auto& p : j["placements"]) idx[p["record_id"]] = p["stack_index"];
    CHECK(idx["t01"] == 0);
    CHECK(idx["t02"] == 1);
    CHECK(idx["t07"] == 2);
    CHECK(idx["t09"] == 3);
  }
  SUBCASE("time filter equals the library call") {
    const auto from = "2013-10-05T00:00:00Z", to = "2014-01-31T00:00:00Z";
    const auto j = body_of(get(service, "/tweets", {{"from", from}, {"to", to}}));
    std::vector<std::string> ids;
    for (const auto& p : j["placements"]) ids.push_back(p["record_id"]);
    CHECK(ids == filter_time(ds, {*parse_iso8601(from), *parse_iso8601(to)}));
    CHECK(ids == std::vector<std::string>{"t03", "t04", "t05", "t06", "t07"});
  }
  SUBCASE("bbox filter") {
    const auto j = body_of(get(service, "/tweets", {{"bbox", "42.355,-71.099,42.357,-71.090"}}));
    std::vector<std::string> ids;
    for (const auto& p : j["placements"]) ids.push_back(p["record_id"]);
    CHECK(ids == std::vector<std::string>{"t01", "t02", "t07", "t09"});
  }
  SUBCASE("bad parameters") {
    CHECK(body_of(get(service, "/tweets", {{"from", "yesterday"}}))["error"] == "bad-timestamp");
    CHECK(body_of(get(service, "/tweets", {{"from", "2014-01-01T00:00:00Z"}, {"to", "2013-01-01T00:00:00Z"}}))["error"] ==
          "bad-interval");
    CHECK(get(service, "/tweets", {{"bbox", "1,2,3"}}).status == 400);
    CHECK(get(service, "/stats", {{"cell_size", "-4"}}).status == 400);
    CHECK(get(service, "/nowhere").status == 404);
    CHECK(post(service, "/health", "").status == 405);
    CHECK(post(service, "/query", "not json").status == 400);
  }
  SUBCASE("query wall") {
    const auto blank = post(service, "/query", R"({"keyword": "   "})");
    CHECK(blank.status == 400);
    CHECK(body_of(blank)["error"] == "empty-query");
    const auto r = post(service, "/query", R"({"keyword": "dining"})");
    REQUIRE(r.status == 200);
    CHECK(r.body == Json{{"wall", to_json(build_wall(ds, snap->frame, "dining", search(ds, "dining"), {}))}}.dump());
    CHECK(body_of(r)["wall"]["assignments"].size() == 3);
  }
  SUBCASE("user path and stats serialize the library results") {
    CHECK(get(service, "/users/mit_eats/path").body == to_json(user_path(ds, "mit_eats")).dump());
    CHECK(body_of(get(service, "/users/mit_eats/path"))["edges"].size() == 2);
    CHECK(get(service, "/users/ghost/path").body == to_json(user_path(ds, "ghost")).dump());
    CHECK(get(service, "/stats", {{"cell_size", "50"}}).body == to_json(cluster_stats(ds, snap->frame, 50.0)).dump());
    CHECK(get(service, "/stats").body == to_json(cluster_stats(ds, snap->frame, 2.0)).dump());
  }
  SUBCASE("scene") {
    const auto j = body_of(get(service, "/scene"));
    CHECK(j["frame"] == to_json(snap->frame));
    CHECK(j["ground_image"].is_null());
  }
}

TEST_CASE("reload") {
  testing::TempDir dir;
  const auto data = dir.write("d.tsv", testing::header_line() + "a\tu\t1\t2013-10-04T00:00:00Z\t42.352\t-71.095\tx\n");
  ServiceConfig cfg;
  cfg.dataset_path = data;
  Service service(cfg);
  CHECK(service.snapshot()->generation == 1);

  dir.write("d.tsv", testing::header_line() + "a\tu\t1\t2013-10-04T00:00:00Z\t42.352\t-71.095\tx\n" +
                         "b\tu\t1\t2013-10-05T00:00:00Z\t42.352\t-71.095\ty\n");
  const auto r = post(service, "/admin/reload", "");
  REQUIRE(r.status == 200);
  CHECK(body_of(r)["generation"] == 2);
  CHECK(parse_iso8601(body_of(r)["load_timestamp"].get<std::string>()));
  CHECK(service.snapshot()->dataset.records.size() == 2);

  std::filesystem::remove(data);
  const auto failed = post(service, "/admin/reload", "");
  CHECK(failed.status == 500);
  CHECK(service.snapshot()->dataset.records.size() == 2);
  CHECK(service.snapshot()->generation == 2);
}

TEST_CASE("http transport") {
  ServiceConfig cfg = ServiceConfig::load(kFixtures / "config.json");
  testing::TempDir dir;
  cfg.ground_image_path = dir.write("ground.png", "\x89PNG fake");
  Service service(cfg);
  const int port = service.bind(0);
  REQUIRE(port > 0);
  std::thread server([&] { service.listen_after_bind(); });

  httplib::Client client("127.0.0.1", port);
  for (int i = 0; i < 100 && !client.Get("/health"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  auto detail = client.Get("/tweets/t01");
  REQUIRE(detail);
  CHECK(detail->body == get(service, "/tweets/t01").body);
  auto filtered = client.Get("/tweets?from=2013-10-05T00:00:00Z&to=2014-01-31T00:00:00Z");
  REQUIRE(filtered);
  CHECK(filtered->body == get(service, "/tweets", {{"from", "2013-10-05T00:00:00Z"}, {"to", "2014-01-31T00:00:00Z"}}).body);
  auto query = client.Post("/query", R"({"keyword": ""})", "application/json");
  REQUIRE(query);
  CHECK(query->status == 400);
  auto scene = client.Get("/scene");
  REQUIRE(scene);
  CHECK(Json::parse(scene->body)["ground_image"] == "/assets/ground-image");
  auto image = client.Get("/assets/ground-image");
  REQUIRE(image);
  CHECK(image->get_header_value("Content-Type") == "image/png");

  service.stop();
  server.join();
}
