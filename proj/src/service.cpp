#include "sememe_kb/service.hpp"

#include <csignal>
#include <functional>
#include <thread>

#include <pthread.h>

#include <httplib.h>

#include "sememe_kb/dataset.hpp"

namespace sememe_kb {

namespace {

constexpr const char* kJsonType = "application/json; charset=utf-8";

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJsonType);
}

void handle(httplib::Response& res, const std::function<Json()>& fn) {
  try {
    send(res, 200, fn());
  } catch (const KbError& e) {
    send(res, http_status(e.kind()), error_body(e.kind(), e.what()));
  } catch (const std::exception& e) {
    send(res, 500, error_body("Internal", e.what()));
  }
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

std::string required(const httplib::Request& req, const char* name) {
  auto value = param(req, name);
  if (!value) throw KbError(ErrorKind::InvalidArgument, std::string("missing parameter '") + name + "'");
  return *value;
}

std::size_t positive(const httplib::Request& req, const char* name, std::size_t fallback) {
  const auto value = param(req, name);
  if (!value) return fallback;
  const auto n = require_uint(name, *value);
  if (n == 0) throw KbError(ErrorKind::InvalidArgument, std::string("parameter '") + name + "' must be at least 1");
  return static_cast<std::size_t>(n);
}

bool flag(const httplib::Request& req, const char* name) {
  const auto value = param(req, name);
  if (!value || *value == "0" || *value == "false") return false;
  if (value->empty() || *value == "1" || *value == "true") return true;
  throw KbError(ErrorKind::InvalidArgument, std::string("parameter '") + name + "' must be a boolean");
}

SenseId sense_id(const httplib::Request& req) { return require_uint("sense id", req.matches[1].str()); }

}  // namespace

void ServiceConfig::validate() const {
  if (port < 1 || port > 65535) throw KbError(ErrorKind::InvalidArgument, "port must be within [1, 65535]");
  if (!std::filesystem::is_directory(data_dir)) {
    throw KbError(ErrorKind::InvalidArgument, "data directory not found: " + data_dir.string());
  }
}

HttpService::HttpService(std::shared_ptr<const Queries> queries, ServiceConfig config)
    : queries_(std::move(queries)), config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpService::~HttpService() { stop(); }

void HttpService::install_routes() {
  auto& srv = *server_;
  const Queries& q = *queries_;

  srv.Get("/api/stats", [&q](const httplib::Request&, httplib::Response& res) { handle(res, [&] { return q.stats(); }); });

  srv.Get("/api/search", [&q](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] {
      const auto query = required(req, "q");
      const Lang lang = require_lang("lang", param(req, "lang").value_or("auto"));
      const MatchMode mode = require_mode("mode", param(req, "mode").value_or("exact"));
      return q.search(query, lang, mode, positive(req, "limit", kDefaultLimit));
    });
  });

  srv.Get(R"(/api/sense/([^/]+))", [&q](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return q.sense_card(sense_id(req)); });
  });

  srv.Get(R"(/api/sense/([^/]+)/tree)", [&q](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] {
      const SenseId id = sense_id(req);
      const RenderFormat format = require_format("format", param(req, "format").value_or("ascii"));
      return q.tree(id, format, flag(req, "ascii_only"));
    });
  });

  srv.Get(R"(/api/sense/([^/]+)/nearest)", [&q](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] {
      const SenseId id = sense_id(req);
      const auto k = param(req, "k");
      return q.nearest(id, k ? static_cast<std::size_t>(require_uint("k", *k)) : q.k_default());
    });
  });

  srv.Get("/api/similarity", [&q](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] {
      const auto a = required(req, "a");
      const auto b = required(req, "b");
      return q.similarity(a, b, require_word_lang("lang", param(req, "lang").value_or("en")));
    });
  });

  srv.Get("/api/sememes", [&q](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return q.sememes(required(req, "q")); });
  });

  srv.Get(R"(/api/sememe/([^/]+)/senses)", [&q](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] {
      const auto id = require_uint("sememe id", req.matches[1].str());
      if (id > UINT32_MAX) throw KbError(ErrorKind::UnknownSememe, "unknown sememe " + req.matches[1].str());
      return q.sememe_senses(static_cast<SememeId>(id));
    });
  });

  if (config_.static_dir) srv.set_mount_point("/", config_.static_dir->string());

  srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    const bool not_found = res.status == 404;
    send(res, res.status,
         error_body(not_found ? "NotFound" : "HttpError",
                    not_found ? "no such endpoint: " + req.path : "request failed with status " + std::to_string(res.status)));
    return httplib::Server::HandlerResponse::Handled;
  });

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    send(res, 500, error_body("Internal", message));
  });

  if (config_.cors_origin) {
    srv.set_post_routing_handler([origin = *config_.cors_origin](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    });
  }
}

int HttpService::bind() {
  if (config_.port == 0) return server_->bind_to_any_port(config_.host);
  return server_->bind_to_port(config_.host, config_.port) ? config_.port : -1;
}

bool HttpService::listen() { return server_->listen_after_bind(); }

void HttpService::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

bool HttpService::running() const { return server_->is_running(); }

int serve(const ServiceConfig& config, std::ostream& log) {
  std::shared_ptr<const Queries> queries;
  try {
    config.validate();
    const Dataset ds = load_dataset(config.data_dir);
    const SimilarityConfig sim = config.similarity_config ? SimilarityConfig::from_file(*config.similarity_config)
                                                          : SimilarityConfig{};
    queries = std::make_shared<const Queries>(ds.lexicon, sim, config.k_default);
  } catch (const KbError& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }

  HttpService service(queries, config);
  const int port = service.bind();
  if (port < 0) {
    log << "error: cannot bind " << config.host << ":" << config.port << "\n";
    return 1;
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });

  const auto stats = queries->lexicon().stats();
  log << "serving " << stats.sense_count << " senses on http://" << config.host << ":" << port << "\n" << std::flush;
  const bool ok = service.listen();
  if (!ok) pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  return ok ? 0 : 1;
}

}  // namespace sememe_kb
