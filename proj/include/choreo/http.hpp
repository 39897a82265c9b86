#pragma once

// HTTP faces of the controller and the engine, plus the HTTP transport
// used between them. Wire formats are UTF-8 JSON throughout.

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "httplib.h"

#include "choreo/controller.hpp"
#include "choreo/engine.hpp"

namespace choreo {

inline int status_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NotFound: return 404;
    case ErrorKind::Duplicate: return 409;
    case ErrorKind::Forbidden: return 403;
    case ErrorKind::Transport: return 502;
    default: return 400;
  }
}

namespace detail {

inline void reply_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2), "application/json");
}

inline void reply_error(httplib::Response& res, const Error& e) {
  reply_json(res, status_for(e), {{"error", e.what()}});
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    reply_error(res, e);
  } catch (const json::exception& e) {
    reply_json(res, 400, {{"error", e.what()}});
  } catch (const std::exception& e) {
    reply_json(res, 500, {{"error", e.what()}});
  }
}

}  // namespace detail

// Delivers envelopes and descriptor pushes over real HTTP. Envelopes go to
// the literal endpoint URI from the descriptor; descriptor pushes go to
// PUT {engineBase}/indes.
class HttpTransport : public IndesTransport, public DataTransport {
 public:
  explicit HttpTransport(int timeout_sec = 2) : timeout_sec_(timeout_sec) {}

  bool push_indes(const std::string&, const std::string& engine_base,
                  const InteractionDescriptor& indes) override {
    if (engine_base.empty()) return false;
    httplib::Client client(engine_base);
    client.set_connection_timeout(timeout_sec_, 0);
    client.set_read_timeout(timeout_sec_, 0);
    auto res = client.Put("/indes", indes_to_json(indes).dump(), "application/json");
    return res && res->status >= 200 && res->status < 300;
  }

  bool deliver(const std::string& endpoint_uri, const InputEnvelope& env) override {
    httplib::Client client(uri_base(endpoint_uri));
    client.set_connection_timeout(timeout_sec_, 0);
    client.set_read_timeout(timeout_sec_, 0);
    auto res = client.Post(uri_path(endpoint_uri), to_json(env).dump(),
                           "application/json");
    return res && res->status >= 200 && res->status < 300;
  }

 private:
  int timeout_sec_;
};

// Real HTTP requests for RemoteCall offering implementations.
inline RemoteCaller http_remote_caller(int timeout_sec = 2) {
  return [timeout_sec](const RemoteCallRequest& req) -> RemoteCallResponse {
    httplib::Client client(uri_base(req.uri));
    client.set_connection_timeout(timeout_sec, 0);
    client.set_read_timeout(timeout_sec, 0);
    std::string path = uri_path(req.uri);
    std::string content_type =
        req.content_type.empty() ? "application/octet-stream" : req.content_type;
    httplib::Result res;
    switch (req.method) {
      case EndpointType::HttpGet: res = client.Get(path); break;
      case EndpointType::HttpPost: res = client.Post(path, req.body, content_type); break;
      case EndpointType::HttpPut: res = client.Put(path, req.body, content_type); break;
    }
    if (!res || res->status < 200 || res->status >= 300) return {false, {}};
    return {true, res->body};
  };
}

// ---------------------------------------------------------------------------
// Controller service

class ControllerServer {
 public:
  explicit ControllerServer(Controller& controller) : controller_(controller) {
    using namespace httplib;

    server_.Post("/offerings", [this](const Request& req, Response& res) {
      detail::guarded(res, [&] {
        OfferingDescription od = offering_from_json(json::parse(req.body));
        RegistrationOutcome outcome = controller_.register_offering(std::move(od));
        detail::reply_json(res, 201, to_json(outcome));
      });
    });

    server_.Delete(R"(/offerings/([^/]+))", [this](const Request& req, Response& res) {
      detail::guarded(res, [&] {
        bool replace = req.get_param_value("replace") == "true";
        RemovalOutcome outcome =
            controller_.deregister_offering(req.matches[1], replace);
        detail::reply_json(res, 200, to_json(outcome));
      });
    });

    server_.Get("/offerings", [this](const Request&, Response& res) {
      detail::guarded(res, [&] {
        json arr = json::array();
        for (const OfferingDescription* od :
             controller_.registry().offerings_by_registration())
          arr.push_back(offering_to_json(*od));
        detail::reply_json(res, 200, arr);
      });
    });

    server_.Get(R"(/offerings/([^/]+)/indes)", [this](const Request& req, Response& res) {
      detail::guarded(res, [&] {
        json out = json::object();
        for (const auto& [rrc_id, indes] : controller_.current_indes(req.matches[1]))
          out[rrc_id] = indes_to_json(indes);
        detail::reply_json(res, 200, out);
      });
    });

    server_.Post("/recipes", [this](const Request& req, Response& res) {
      detail::guarded(res, [&] {
        Recipe recipe = recipe_from_json(json::parse(req.body));
        controller_.add_recipe(recipe);
        detail::reply_json(res, 201, {{"id", recipe.id}});
      });
    });

    server_.Post("/rrcs", [this](const Request& req, Response& res) {
      detail::guarded(res, [&] {
        json body = json::parse(req.body);
        std::map<std::string, Registry::IrcSpec> specs;
        for (const auto& [ing, cfg] : body.value("ingredients", json::object()).items()) {
          Registry::IrcSpec spec;
          spec.osr = parse_osr(cfg.value("osr", std::string()));
          spec.min = cfg.value("min", 0u);
          if (cfg.contains("max") && !cfg.at("max").is_null())
            spec.max = cfg.at("max").get<std::uint32_t>();
          specs[ing] = std::move(spec);
        }
        std::optional<std::string> id;
        if (body.contains("id")) id = body.at("id").get<std::string>();
        Rrc rrc = controller_.create_rrc(body.at("recipeId").get<std::string>(),
                                         specs, id);
        detail::reply_json(res, 201, rrc_to_json(rrc));
      });
    });

    server_.Post(R"(/rrcs/([^/]+)/seed)", [this](const Request& req, Response& res) {
      detail::guarded(res, [&] {
        SeedOutcome outcome = controller_.seed_rrc(req.matches[1]);
        detail::reply_json(res, 200, to_json(outcome));
      });
    });

    server_.Get("/rrcs", [this](const Request&, Response& res) {
      detail::guarded(res, [&] {
        json arr = json::array();
        for (const Rrc& rrc : controller_.registry().rrcs())
          arr.push_back(rrc_to_json(rrc));
        detail::reply_json(res, 200, arr);
      });
    });

    server_.Get(R"(/rrcs/([^/]+))", [this](const Request& req, Response& res) {
      detail::guarded(res, [&] {
        const Rrc* rrc = controller_.registry().find_rrc(req.matches[1]);
        if (!rrc) fail(ErrorKind::NotFound, "unknown rrc '" + std::string(req.matches[1]) + "'");
        detail::reply_json(res, 200, rrc_to_json(*rrc));
      });
    });

    server_.Put(R"(/ircs/([^/]+)/osr)", [this](const Request& req, Response& res) {
      detail::guarded(res, [&] {
        json body = json::parse(req.body);
        OsrExpr osr = parse_osr(body.at("osr").get<std::string>());
        OsrChangeOutcome outcome = controller_.replace_osr(req.matches[1], osr);
        detail::reply_json(res, 200, to_json(outcome));
      });
    });

    server_.Get("/health", [](const Request&, Response& res) {
      detail::reply_json(res, 200, {{"status", "ok"}});
    });
  }

  // Binds and serves on a background thread. port 0 picks a free port.
  int start(const std::string& host, int port) {
    port_ = port == 0 ? server_.bind_to_any_port(host)
                      : (server_.bind_to_port(host, port) ? port : -1);
    if (port_ < 0) fail(ErrorKind::Config, "controller: cannot bind " + host);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port_;
  }

  void stop() {
    if (thread_.joinable()) {
      server_.stop();
      thread_.join();
    }
  }

  int port() const { return port_; }

  ~ControllerServer() { stop(); }

 private:
  Controller& controller_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
};

// ---------------------------------------------------------------------------
// Engine service

class EngineServer {
 public:
  explicit EngineServer(Engine& engine) : engine_(engine) {
    using namespace httplib;

    server_.Put("/indes", [this](const Request& req, Response& res) {
      detail::guarded(res, [&] {
        engine_.accept_indes(indes_from_json(json::parse(req.body)));
        detail::reply_json(res, 200, {{"status", "ok"}});
      });
    });

    server_.Post("/inputs", [this](const Request& req, Response& res) {
      detail::guarded(res, [&] {
        engine_.receive_input(envelope_from_json(json::parse(req.body)));
        detail::reply_json(res, 200, {{"status", "ok"}});
      });
    });

    server_.Get("/indes", [this](const Request&, Response& res) {
      detail::guarded(res, [&] {
        json out = json::object();
        for (const auto& [rrc_id, indes] : engine_.descriptors())
          out[rrc_id] = indes_to_json(indes);
        detail::reply_json(res, 200, out);
      });
    });

    // Harness stimulus: make the device produce a value on an output port.
    server_.Post("/emit", [this](const Request& req, Response& res) {
      detail::guarded(res, [&] {
        json body = json::parse(req.body);
        DeliveryReport report = engine_.emit(body.at("port").get<std::string>(),
                                             body.value("value", json()));
        detail::reply_json(res, 200,
                           {{"deliveries", report.deliveries.size()},
                            {"delivered", report.delivered_count()}});
      });
    });

    server_.Get("/health", [this](const Request&, Response& res) {
      detail::reply_json(res, 200,
                         {{"status", "ok"}, {"offering", engine_.offering().local_id}});
    });
  }

  int start(const std::string& host, int port) {
    port_ = port == 0 ? server_.bind_to_any_port(host)
                      : (server_.bind_to_port(host, port) ? port : -1);
    if (port_ < 0) fail(ErrorKind::Config, "engine: cannot bind " + host);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port_;
  }

  void stop() {
    if (thread_.joinable()) {
      server_.stop();
      thread_.join();
    }
  }

  int port() const { return port_; }

  ~EngineServer() { stop(); }

 private:
  Engine& engine_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
};

// Startup handshake: register the offering with the controller (an already
// known id is fine, the engine is reconnecting) and pull current
// descriptors.
inline void engine_startup_sync(Engine& engine, const std::string& controller_base,
                                int timeout_sec = 5) {
  httplib::Client client(controller_base);
  client.set_connection_timeout(timeout_sec, 0);
  client.set_read_timeout(timeout_sec, 0);
  auto res = client.Post("/offerings",
                         offering_to_json(engine.offering(), false).dump(),
                         "application/json");
  if (!res)
    fail(ErrorKind::Transport, "engine: cannot reach controller at " + controller_base);
  if (res->status != 201 && res->status != 409)
    fail(ErrorKind::Transport,
         "engine: registration failed with status " + std::to_string(res->status) +
             ": " + res->body);
  auto indes = client.Get("/offerings/" + engine.offering().local_id + "/indes");
  if (indes && indes->status == 200) {
    json docs = json::parse(indes->body, nullptr, false);
    if (!docs.is_discarded())
      for (const auto& [rrc_id, doc] : docs.items())
        engine.accept_indes(indes_from_json(doc));
  }
}

}  // namespace choreo
