#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include "sememe_kb/queries.hpp"

namespace httplib {
class Server;
}

namespace sememe_kb {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir;
  std::optional<std::filesystem::path> similarity_config;
  std::size_t k_default = kDefaultK;
  /// Extra origin allowed via Access-Control-Allow-Origin (e.g. the
  /// explorer's dev server). Unset means same-origin only.
  std::optional<std::string> cors_origin;
  /// Static bundle served at `/`, if present.
  std::optional<std::filesystem::path> static_dir;

  /// Throws KbError(InvalidArgument) for a bad port or missing data dir.
  void validate() const;
};

/// Read-only JSON API over a loaded dataset.
///
///   GET /api/search?q&lang&mode&limit
///   GET /api/sense/{id}
///   GET /api/sense/{id}/tree?format&ascii_only
///   GET /api/sense/{id}/nearest?k
///   GET /api/similarity?a&b&lang
///   GET /api/sememes?q
///   GET /api/sememe/{id}/senses
///   GET /api/stats
class HttpService {
 public:
  HttpService(std::shared_ptr<const Queries> queries, ServiceConfig config);
  ~HttpService();

  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds `config.host`; port 0 picks a free port. Returns the bound port
  /// or -1.
  int bind();
  /// Blocks until `stop()`; in-flight requests finish first.
  bool listen();
  void stop();
  bool running() const;

 private:
  void install_routes();

  std::shared_ptr<const Queries> queries_;
  ServiceConfig config_;
  std::unique_ptr<httplib::Server> server_;
};

/// Loads the dataset, binds, and serves until SIGINT/SIGTERM. Returns a
/// process exit code.
int serve(const ServiceConfig& config, std::ostream& log);

}  // namespace sememe_kb
