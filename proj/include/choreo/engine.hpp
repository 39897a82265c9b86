#pragma once

// Per-device runtime. An engine holds its offering description and the
// interaction descriptors pushed by the controller, buffers the latest
// value per input port, invokes the offering implementation on every
// received input, and forwards produced outputs to the endpoints named in
// its descriptors. Once wired, engines route without the controller.

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "choreo/model.hpp"
#include "choreo/transport.hpp"

namespace choreo {

// Offering implementation as a plain function: latest input-port values in,
// output-port values out. An empty result emits nothing.
using LocalHandler =
    std::function<std::map<std::string, json>(const std::map<std::string, json>&)>;

inline bool truthy(const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number()) return v.get<double>() != 0.0;
  if (v.is_string()) return !v.get<std::string>().empty();
  return false;
}

// Named handlers referenced by scenario device specs.
class HandlerRegistry {
 public:
  static HandlerRegistry& instance() {
    static HandlerRegistry reg;
    return reg;
  }

  void add(const std::string& name, LocalHandler handler) {
    handlers_[name] = std::move(handler);
  }

  LocalHandler find(const std::string& name) const {
    auto it = handlers_.find(name);
    if (it == handlers_.end())
      fail(ErrorKind::NotFound, "unknown local handler '" + name + "'");
    return it->second;
  }

 private:
  HandlerRegistry() {
    handlers_["sink"] = [](const std::map<std::string, json>&) {
      return std::map<std::string, json>{};
    };
    handlers_["echo"] = [](const std::map<std::string, json>& in) { return in; };
    // Lighting control: full brightness while any motion was last reported
    // true and any switch last reported enabled.
    handlers_["any-motion-and-any-switch"] =
        [](const std::map<std::string, json>& in) {
          std::map<std::string, json> out;
          auto motion = in.find("sensorin");
          auto enabled = in.find("switchin");
          if (motion != in.end() && truthy(motion->second) &&
              enabled != in.end() && truthy(enabled->second))
            out["brightness"] = 1.0;
          return out;
        };
  }

  std::map<std::string, LocalHandler> handlers_;
};

struct Delivery {
  std::string endpoint_uri;
  std::string target_port;
  bool delivered = false;
};

struct DeliveryReport {
  std::vector<Delivery> deliveries;

  std::size_t delivered_count() const {
    std::size_t n = 0;
    for (const Delivery& d : deliveries) n += d.delivered ? 1 : 0;
    return n;
  }
};

// Hook used when a RemoteCall implementation fires; kept injectable so unit
// tests and the mock network can intercept device requests. The default
// (set by http.hpp) performs a real HTTP request.
struct RemoteCallRequest {
  std::string uri;
  EndpointType method = EndpointType::HttpPost;
  std::string content_type;
  std::string accept_type;
  std::string body;
};
struct RemoteCallResponse {
  bool ok = false;
  std::string body;
};
using RemoteCaller = std::function<RemoteCallResponse(const RemoteCallRequest&)>;

class Engine {
 public:
  Engine(OfferingDescription od, DataTransport& transport,
         LocalHandler handler = {})
      : od_(std::move(od)), transport_(transport), handler_(std::move(handler)) {}

  const OfferingDescription& offering() const { return od_; }

  void set_remote_caller(RemoteCaller caller) { remote_caller_ = std::move(caller); }

  // Descriptor replacement is atomic per RRC; an empty descriptor detaches
  // the engine from that RRC (inputs are acknowledged but dropped).
  void accept_indes(InteractionDescriptor indes) {
    if (indes.offering != od_.local_id)
      fail(ErrorKind::Invariant, "descriptor for '" + indes.offering +
                                     "' pushed to engine '" + od_.local_id + "'");
    for (const auto& [port, targets] : indes.outputs)
      if (!od_.find_output(port))
        fail(ErrorKind::Invariant,
             "descriptor names unknown output port '" + port + "'");
    for (const auto& [source, ports] : indes.inputs)
      for (const std::string& port : ports)
        if (!od_.find_input(port))
          fail(ErrorKind::Invariant,
               "descriptor names unknown input port '" + port + "'");
    std::lock_guard lock(mutex_);
    descriptors_[indes.rrc] = std::move(indes);
  }

  std::map<std::string, InteractionDescriptor> descriptors() const {
    std::lock_guard lock(mutex_);
    return descriptors_;
  }

  // Inbound data from a peer. Stores the value, invokes the implementation
  // (latest-value semantics across the other ports), and forwards any
  // produced outputs. Inputs from sources not named in the descriptor are
  // rejected.
  DeliveryReport receive_input(const InputEnvelope& env) {
    std::lock_guard lock(mutex_);
    auto d = descriptors_.find(env.rrc);
    if (d == descriptors_.end())
      fail(ErrorKind::NotFound, "engine '" + od_.local_id +
                                    "': no descriptor for rrc '" + env.rrc + "'");
    if (d->second.empty()) return {};  // detached: acknowledge, no effect
    if (!od_.find_input(env.port))
      fail(ErrorKind::Invariant, "engine '" + od_.local_id +
                                     "': undeclared input port '" + env.port + "'");
    auto expected = d->second.inputs.find(env.source);
    if (expected == d->second.inputs.end())
      fail(ErrorKind::Forbidden, "engine '" + od_.local_id +
                                     "': input from undeclared source '" +
                                     env.source + "'");
    buffer_[{env.rrc, env.port}] = env.value;
    auto outputs = invoke_implementation(env.rrc);
    return forward_outputs(env.rrc, outputs);
  }

  // Harness stimulus: emit a value on one of our output ports across every
  // descriptor that routes it.
  DeliveryReport emit(const std::string& port, const json& value) {
    if (!od_.find_output(port))
      fail(ErrorKind::Invariant, "engine '" + od_.local_id +
                                     "': undeclared output port '" + port + "'");
    std::lock_guard lock(mutex_);
    DeliveryReport report;
    for (const auto& [rrc_id, indes] : descriptors_) {
      DeliveryReport r = forward_outputs(rrc_id, {{port, value}});
      report.deliveries.insert(report.deliveries.end(), r.deliveries.begin(),
                               r.deliveries.end());
    }
    return report;
  }

  // Applies the implementation to the RRC's current buffer. Local handlers
  // run in-process; a request template makes this a remote call against the
  // first endpoint. Sinks (no declared outputs) never produce values.
  std::map<std::string, json> invoke_implementation(const std::string& rrc_id) {
    std::map<std::string, json> inputs;
    for (const auto& [key, value] : buffer_)
      if (key.first == rrc_id) inputs[key.second] = value;

    std::map<std::string, json> raw;
    if (handler_) {
      raw = handler_(inputs);
    } else if (od_.request_template) {
      raw = invoke_remote(inputs);
    } else {
      return {};
    }
    std::map<std::string, json> outputs;
    for (auto& [port, value] : raw) {
      if (!od_.find_output(port)) {
        log("implementation produced undeclared output port '" + port + "'");
        continue;
      }
      outputs[port] = std::move(value);
    }
    return outputs;
  }

  // Fans each produced output out to the endpoints its descriptor names.
  // Deliveries are independent; a failed delivery is retried once.
  DeliveryReport forward_outputs(const std::string& rrc_id,
                                 const std::map<std::string, json>& values) {
    DeliveryReport report;
    auto d = descriptors_.find(rrc_id);
    if (d == descriptors_.end()) return report;
    for (const auto& [port, value] : values) {
      auto targets = d->second.outputs.find(port);
      if (targets == d->second.outputs.end()) continue;
      for (const auto& [uri, target_port] : targets->second) {
        InputEnvelope env{target_port, value, od_.local_id, rrc_id};
        bool ok = transport_.deliver(uri, env) || transport_.deliver(uri, env);
        if (!ok)
          log("delivery to " + uri + " failed (port '" + target_port + "')");
        report.deliveries.push_back({uri, target_port, ok});
      }
    }
    return report;
  }

  // Latest buffered value per input port for one RRC (test access).
  std::map<std::string, json> buffered(const std::string& rrc_id) const {
    std::lock_guard lock(mutex_);
    std::map<std::string, json> out;
    for (const auto& [key, value] : buffer_)
      if (key.first == rrc_id) out[key.second] = value;
    return out;
  }

  const std::vector<std::string>& log_lines() const { return log_; }

 private:
  std::map<std::string, json> invoke_remote(
      const std::map<std::string, json>& inputs) {
    if (od_.endpoints.empty()) {
      log("remote call skipped: no endpoints");
      return {};
    }
    std::string body;
    if (!interpolate(*od_.request_template, inputs, body)) return {};
    const Endpoint& ep = od_.endpoints.front();
    std::string uri = ep.uri;
    if (uri.find("@@") != std::string::npos && !interpolate(uri, inputs, uri))
      return {};

    if (!remote_caller_) {
      log("remote call skipped: no remote caller configured");
      return {};
    }
    RemoteCallRequest request{uri, ep.endpoint_type, ep.content_type,
                              ep.accept_type, body};
    RemoteCallResponse response = remote_caller_(request);
    if (!response.ok) {
      response = remote_caller_(request);  // one retry
      if (!response.ok) {
        log("remote call to " + uri + " failed");
        return {};
      }
    }
    if (od_.output_data.empty()) return {};  // sink: nothing to parse
    return parse_response(response.body);
  }

  // Replaces every @@name@@ occurrence with the buffered value; a missing
  // value skips the invocation.
  bool interpolate(const std::string& tmpl,
                   const std::map<std::string, json>& inputs, std::string& out) {
    std::string result;
    std::size_t pos = 0;
    while (true) {
      std::size_t open = tmpl.find("@@", pos);
      if (open == std::string::npos) {
        result += tmpl.substr(pos);
        break;
      }
      std::size_t close = tmpl.find("@@", open + 2);
      if (close == std::string::npos) {
        result += tmpl.substr(pos);
        break;
      }
      std::string name = tmpl.substr(open + 2, close - open - 2);
      auto hit = inputs.find(name);
      if (hit == inputs.end()) {
        log("invocation skipped: no buffered value for placeholder '@@" + name +
            "@@'");
        return false;
      }
      result += tmpl.substr(pos, open - pos);
      result += hit->second.is_string() ? hit->second.get<std::string>()
                                        : hit->second.dump();
      pos = close + 2;
    }
    out = std::move(result);
    return true;
  }

  std::map<std::string, json> parse_response(const std::string& body) {
    if (!od_.response_mapping) return {};
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) {
      log("unparseable response body");
      return {};
    }
    std::map<std::string, json> outputs;
    for (const auto& [port, path] : *od_.response_mapping) {
      const json* node = &doc;
      bool found = true;
      for (const std::string& seg : split(path, '.')) {
        if (node->is_object() && node->contains(seg)) {
          node = &node->at(seg);
        } else if (node->is_array() && !seg.empty() &&
                   seg.find_first_not_of("0123456789") == std::string::npos &&
                   std::stoul(seg) < node->size()) {
          node = &(*node)[std::stoul(seg)];
        } else {
          found = false;
          break;
        }
      }
      if (found)
        outputs[port] = *node;
      else
        log("response path '" + path + "' not found for port '" + port + "'");
    }
    return outputs;
  }

  void log(const std::string& line) { log_.push_back(od_.local_id + ": " + line); }

  OfferingDescription od_;
  DataTransport& transport_;
  LocalHandler handler_;
  RemoteCaller remote_caller_;
  mutable std::recursive_mutex mutex_;
  std::map<std::string, InteractionDescriptor> descriptors_;  // rrc -> indes
  std::map<std::pair<std::string, std::string>, json> buffer_;  // (rrc, port)
  std::vector<std::string> log_;
};

}  // namespace choreo
