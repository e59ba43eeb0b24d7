#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "seedrel/experiment.hpp"
#include "seedrel/retrieval.hpp"

namespace seedrel {

struct ServiceReply {
  int status = 200;
  nlohmann::json body;
};

/// HTTP surface under /v1 over one immutable corpus. Handlers are plain
/// functions of the request so they can be exercised without a socket;
/// `listen` wires them into an httplib server.
class RetrievalService {
 public:
  explicit RetrievalService(EvalConfig defaults = {}, std::size_t max_seeds = kDefaultMaxSeeds)
      : defaults_(std::move(defaults)), max_seeds_(max_seeds) {}

  void set_corpus(std::shared_ptr<const Corpus> corpus) {
    std::lock_guard lock(mu_);
    corpus_ = std::move(corpus);
  }

  /// Exclusive (re)load; requests arriving meanwhile get 503.
  void load(const CorpusSource& src) {
    set_corpus(nullptr);
    auto c = std::make_shared<const Corpus>(load_corpus(src));
    set_corpus(std::move(c));
  }

  std::shared_ptr<const Corpus> corpus() const {
    std::lock_guard lock(mu_);
    return corpus_;
  }

  ServiceReply handle_retrieve(const std::string& body) const {
    auto c = corpus();
    if (!c) return unavailable();
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) return {400, {{"error", "request body is not valid JSON"}}};
    try {
      const auto req = parse_retrieval_request(j);
      return {200, to_json(retrieve(*c, req, defaults_, max_seeds_))};
    } catch (const RequestError& e) {
      auto out = e.detail();
      out["error"] = e.what();
      return {e.status(), out};
    } catch (const std::exception& e) {
      return {500, {{"error", e.what()}}};
    }
  }

  ServiceReply handle_publication(const std::string& id_text) const {
    auto c = corpus();
    if (!c) return unavailable();
    const auto id = detail::parse_int<PubId>(id_text);
    if (!id) return {400, {{"error", "publication id must be an integer"}}};
    const auto v = c->graph.find(*id);
    if (!v) return {404, {{"error", "unknown publication " + std::to_string(*id)}}};
    return {200, publication_json(*c, *v)};
  }

  ServiceReply handle_approaches() const { return {200, approaches_json(defaults_)}; }

  ServiceReply handle_health() const {
    auto c = corpus();
    if (!c) return {503, {{"status", "loading"}, {"corpus_loaded", false}}};
    return {200,
            {{"status", "ok"},
             {"corpus_loaded", true},
             {"nodes", c->graph.node_count()},
             {"edges", c->graph.edge_count()},
             {"version", std::string(kSoftwareVersion)}}};
  }

  /// Binds to host:port (port 0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port) {
    install_routes();
    if (port == 0) return server_.bind_to_any_port(host);
    return server_.bind_to_port(host, port) ? port : -1;
  }

  /// Blocks until stop().
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  bool running() const { return server_.is_running(); }

 private:
  static ServiceReply unavailable() { return {503, {{"error", "corpus not loaded"}}}; }

  static void reply(httplib::Response& res, const ServiceReply& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  }

  void install_routes() {
    if (routes_installed_) return;
    routes_installed_ = true;
    server_.Post("/v1/retrieve",
                 [this](const httplib::Request& req, httplib::Response& res) { reply(res, handle_retrieve(req.body)); });
    server_.Get(R"(/v1/publications/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, handle_publication(req.matches[1]));
    });
    server_.Get("/v1/approaches",
                [this](const httplib::Request&, httplib::Response& res) { reply(res, handle_approaches()); });
    server_.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) { reply(res, handle_health()); });
  }

  EvalConfig defaults_;
  std::size_t max_seeds_;
  mutable std::mutex mu_;
  std::shared_ptr<const Corpus> corpus_;
  httplib::Server server_;
  bool routes_installed_ = false;
};

}  // namespace seedrel
