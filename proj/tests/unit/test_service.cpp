#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "sememe_kb/dataset.hpp"
#include "sememe_kb/queries.hpp"
#include "sememe_kb/service.hpp"
#include "test_support.hpp"

using namespace sememe_kb;
namespace t = sememe_kb::testing;

namespace {

struct Running {
  std::shared_ptr<const Queries> queries;
  HttpService service;
  int port;
  std::thread thread;

  explicit Running(ServiceConfig cfg = {})
      : queries(std::make_shared<const Queries>(load_dataset(t::fixture_dir()).lexicon)),
        service(queries, with_any_port(std::move(cfg))),
        port(service.bind()),
        thread([this] { service.listen(); }) {
    REQUIRE(port > 0);
    while (!service.running()) std::this_thread::yield();
  }
  ~Running() {
    service.stop();
    thread.join();
  }

  static ServiceConfig with_any_port(ServiceConfig cfg) {
    cfg.port = 0;
    return cfg;
  }

  httplib::Result get(const std::string& path) const {
    httplib::Client client("127.0.0.1", port);
    return client.Get(path);
  }
};

Json body(const httplib::Result& r) { return Json::parse(r->body); }

}  // namespace

TEST_CASE("endpoints equal direct library calls") {
  Running srv;
  const Queries& q = *srv.queries;

  auto r = srv.get("/api/stats");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->get_header_value("Content-Type").starts_with("application/json"));
  CHECK(body(r) == q.stats());

  CHECK(body(srv.get("/api/search?q=apple&lang=en")) == q.search("apple", Lang::En, MatchMode::Exact, kDefaultLimit));
  CHECK(body(srv.get("/api/search?q=%E8%8B%B9&mode=prefix")) == q.search("苹", Lang::Auto, MatchMode::Prefix, kDefaultLimit));
  CHECK(body(srv.get("/api/search?q=a&mode=substring&limit=3")).size() <= 3);
  CHECK(body(srv.get("/api/sense/1001")) == q.sense_card(1001));
  CHECK(body(srv.get("/api/sense/1019/tree?format=json")) == q.tree(1019, RenderFormat::Json, false));
  CHECK(body(srv.get("/api/sense/1019/tree?ascii_only=1")) == q.tree(1019, RenderFormat::Ascii, true));
  CHECK(body(srv.get("/api/sense/1019/nearest?k=3")) == q.nearest(1019, 3));
  CHECK(body(srv.get("/api/sense/1019/nearest")) == q.nearest(1019, kDefaultK));
  CHECK(body(srv.get("/api/similarity?a=boy&b=man")) == q.similarity("boy", "man", Lang::En));
  CHECK(body(srv.get("/api/sememes?q=human")) == q.sememes("human"));
  CHECK(body(srv.get("/api/sememe/3/senses")) == q.sememe_senses(3));
}

TEST_CASE("sense card shape") {
  Running srv;
  const auto card = body(srv.get("/api/sense/1001"));
  for (const char* key : {"id", "zh", "en", "pos", "def_text", "def_tree", "sentiment", "examples", "near"}) {
    CHECK(card.contains(key));
  }
  const auto& near = card["near"];
  CHECK(near.size() == kDefaultK);
  for (std::size_t i = 0; i < near.size(); ++i) {
    CHECK(near[i]["sense"]["id"] != 1001);
    if (i > 0) CHECK(near[i]["score"].get<double>() <= near[i - 1]["score"].get<double>());
  }
}

TEST_CASE("malformed requests map to 400 and 404") {
  Running srv;
  struct Case {
    const char* path;
    int status;
    const char* kind;
  };
  const Case cases[] = {
      {"/api/search", 400, "InvalidArgument"},
      {"/api/search?q=a&lang=fr", 400, "InvalidArgument"},
      {"/api/search?q=a&mode=fuzzy", 400, "InvalidArgument"},
      {"/api/search?q=a&limit=0", 400, "InvalidArgument"},
      {"/api/sense/abc", 400, "InvalidArgument"},
      {"/api/sense/999999", 404, "UnknownSense"},
      {"/api/sense/1001/tree?format=svg", 400, "InvalidArgument"},
      {"/api/sense/1001/nearest?k=0", 400, "InvalidK"},
      {"/api/similarity?a=apple", 400, "InvalidArgument"},
      {"/api/similarity?a=apple&b=nosuchword", 404, "NoSuchWord"},
      {"/api/sememe/9999/senses", 404, "UnknownSememe"},
      {"/api/nothing", 404, "NotFound"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.path);
    const auto r = srv.get(c.path);
    REQUIRE(r);
    CHECK(r->status == c.status);
    const auto b = body(r);
    CHECK(b["error"]["kind"] == c.kind);
    CHECK_FALSE(b["error"]["message"].get<std::string>().empty());
  }
}

TEST_CASE("responses are byte-identical across calls") {
  Running srv;
  for (const char* path : {"/api/stats", "/api/sense/1002", "/api/sense/1002/tree?format=dot",
                           "/api/similarity?a=apple&b=tree", "/api/search?q=a&mode=substring"}) {
    const auto first = srv.get(path);
    REQUIRE(first);
    for (int i = 0; i < 3; ++i) CHECK(srv.get(path)->body == first->body);
  }
}

TEST_CASE("cors header only when configured") {
  {
    Running srv;
    CHECK_FALSE(srv.get("/api/stats")->has_header("Access-Control-Allow-Origin"));
  }
  ServiceConfig cfg;
  cfg.cors_origin = "http://localhost:5173";
  Running srv(cfg);
  CHECK(srv.get("/api/stats")->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
}

TEST_CASE("concurrent clients") {
  Running srv;
  const auto expected = srv.get("/api/sense/1019/nearest?k=10")->body;
  std::vector<std::thread> clients;
  std::atomic<int> mismatches{0};
  for (int i = 0; i < 4; ++i) {
    clients.emplace_back([&] {
      for (int j = 0; j < 10; ++j) {
        const auto r = srv.get("/api/sense/1019/nearest?k=10");
        if (!r || r->body != expected) ++mismatches;
      }
    });
  }
  for (auto& c : clients) c.join();
  CHECK(mismatches == 0);
}

TEST_CASE("service config validation") {
  ServiceConfig cfg;
  cfg.data_dir = t::fixture_dir();
  CHECK_NOTHROW(cfg.validate());
  cfg.port = 70000;
  CHECK_THROWS_AS(cfg.validate(), KbError);
  cfg.port = 8080;
  cfg.data_dir = "/no/such/dir";
  CHECK_THROWS_AS(cfg.validate(), KbError);
}
