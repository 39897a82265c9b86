#pragma once

// Transport seams between controller, engines and peers. The in-process
// mock network and the HTTP transport both implement these.

#include <string>

#include "choreo/model.hpp"

namespace choreo {

// One choreography data item on the wire.
struct InputEnvelope {
  std::string port;  // target input port
  json value;
  std::string source;  // sending offering id
  std::string rrc;

  friend bool operator==(const InputEnvelope&, const InputEnvelope&) = default;
};

inline json to_json(const InputEnvelope& env) {
  return {{"port", env.port},
          {"value", env.value},
          {"source", env.source},
          {"rrc", env.rrc}};
}

inline InputEnvelope envelope_from_json(const json& doc) {
  InputEnvelope env;
  env.port = doc.at("port").get<std::string>();
  env.value = doc.value("value", json());
  env.source = doc.at("source").get<std::string>();
  env.rrc = doc.at("rrc").get<std::string>();
  return env;
}

// Controller-to-engine descriptor pushes. Returns false on transport failure.
class IndesTransport {
 public:
  virtual ~IndesTransport() = default;
  virtual bool push_indes(const std::string& offering_id,
                          const std::string& engine_base,
                          const InteractionDescriptor& indes) = 0;
};

// Engine-to-engine data delivery. Returns false on transport failure.
class DataTransport {
 public:
  virtual ~DataTransport() = default;
  virtual bool deliver(const std::string& endpoint_uri,
                       const InputEnvelope& envelope) = 0;
};

}  // namespace choreo
