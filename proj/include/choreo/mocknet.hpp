#pragma once

// In-process network for deterministic scenario runs and tests: routes
// descriptor pushes by offering id and data deliveries by endpoint URI,
// synchronously, and records everything it carries in a transcript.

#include <map>
#include <memory>
#include <string>

#include "choreo/engine.hpp"
#include "choreo/transport.hpp"

namespace choreo {

class MockNetwork : public IndesTransport, public DataTransport {
 public:
  // Engines are indexed by offering id and by each declared endpoint URI.
  void attach(Engine& engine) {
    engines_[engine.offering().local_id] = &engine;
    for (const Endpoint& ep : engine.offering().endpoints)
      by_endpoint_[ep.uri] = &engine;
  }

  void detach(const std::string& offering_id) {
    auto it = engines_.find(offering_id);
    if (it == engines_.end()) return;
    for (auto ep = by_endpoint_.begin(); ep != by_endpoint_.end();)
      ep = ep->second == it->second ? by_endpoint_.erase(ep) : std::next(ep);
    engines_.erase(it);
  }

  Engine* engine(const std::string& offering_id) const {
    auto it = engines_.find(offering_id);
    return it == engines_.end() ? nullptr : it->second;
  }

  void set_step(int step) { step_ = step; }

  // Failure injection: the next `count` pushes to / deliveries towards the
  // given key report transport failure.
  void fail_pushes(const std::string& offering_id, int count) {
    push_failures_[offering_id] = count;
  }
  void fail_deliveries(const std::string& endpoint_uri, int count) {
    delivery_failures_[endpoint_uri] = count;
  }

  bool push_indes(const std::string& offering_id, const std::string&,
                  const InteractionDescriptor& indes) override {
    if (consume_failure(push_failures_, offering_id)) {
      record({{"type", "indesPushFailed"}, {"to", offering_id}, {"rrc", indes.rrc}});
      return false;
    }
    auto it = engines_.find(offering_id);
    if (it == engines_.end()) {
      record({{"type", "indesPushFailed"}, {"to", offering_id}, {"rrc", indes.rrc}});
      return false;
    }
    record({{"type", "indesPush"},
            {"to", offering_id},
            {"rrc", indes.rrc},
            {"descriptor", indes_to_json(indes)}});
    it->second->accept_indes(indes);
    return true;
  }

  bool deliver(const std::string& endpoint_uri,
               const InputEnvelope& env) override {
    if (consume_failure(delivery_failures_, endpoint_uri)) return false;
    auto it = by_endpoint_.find(endpoint_uri);
    if (it == by_endpoint_.end()) return false;
    record({{"type", "delivery"},
            {"to", it->second->offering().local_id},
            {"endpoint", endpoint_uri},
            {"port", env.port},
            {"value", env.value},
            {"source", env.source},
            {"rrc", env.rrc}});
    try {
      it->second->receive_input(env);
    } catch (const Error& e) {
      // Transport succeeded; the engine rejected the input.
      record({{"type", "inputRejected"},
              {"to", it->second->offering().local_id},
              {"reason", e.what()}});
    }
    return true;
  }

  void record(json entry) {
    entry["step"] = step_;
    entry["seq"] = seq_++;
    transcript_.push_back(std::move(entry));
  }

  const json& transcript() const { return transcript_; }

  // Successful data deliveries, optionally filtered.
  long count_deliveries(const std::string& to = "", const std::string& port = "",
                        int from_step = -1) const {
    long n = 0;
    for (const json& e : transcript_) {
      if (e.value("type", "") != "delivery") continue;
      if (!to.empty() && e.value("to", "") != to) continue;
      if (!port.empty() && e.value("port", "") != port) continue;
      if (from_step >= 0 && e.value("step", 0) < from_step) continue;
      ++n;
    }
    return n;
  }

 private:
  static bool consume_failure(std::map<std::string, int>& table,
                              const std::string& key) {
    auto it = table.find(key);
    if (it == table.end() || it->second <= 0) return false;
    --it->second;
    return true;
  }

  std::map<std::string, Engine*> engines_;
  std::map<std::string, Engine*> by_endpoint_;
  std::map<std::string, int> push_failures_;
  std::map<std::string, int> delivery_failures_;
  json transcript_ = json::array();
  int step_ = 0;
  long seq_ = 0;
};

}  // namespace choreo
