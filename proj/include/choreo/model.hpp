#pragma once

// Persistent domain objects: offering descriptions, recipes and their
// runtime configurations, and the per-offering interaction descriptor.
// JSON readers and writers live next to the types so the wire formats stay
// in one place.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "choreo/core.hpp"
#include "choreo/ontology.hpp"
#include "choreo/osr.hpp"

namespace choreo {

// ---------------------------------------------------------------------------
// Offerings

enum class EndpointType { HttpGet, HttpPost, HttpPut };

inline const char* to_text(EndpointType t) {
  switch (t) {
    case EndpointType::HttpGet: return "HTTP_GET";
    case EndpointType::HttpPost: return "HTTP_POST";
    case EndpointType::HttpPut: return "HTTP_PUT";
  }
  return "HTTP_POST";
}

inline EndpointType endpoint_type_from_text(const std::string& text) {
  if (text == "HTTP_GET") return EndpointType::HttpGet;
  if (text == "HTTP_POST") return EndpointType::HttpPost;
  if (text == "HTTP_PUT") return EndpointType::HttpPut;
  if (text.starts_with("COAP_"))
    fail(ErrorKind::Unsupported,
         "endpoint type '" + text + "': CoAP endpoints are not supported");
  fail(ErrorKind::Parse, "unknown endpoint type '" + text + "'");
}

struct Endpoint {
  std::string uri;
  EndpointType endpoint_type = EndpointType::HttpPost;
  std::string accept_type;
  std::string content_type;

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct DataField {
  std::string name;
  Uri value_type;

  friend bool operator==(const DataField&, const DataField&) = default;
};

struct OfferingDescription {
  std::string local_id;
  Uri category;
  std::vector<Endpoint> endpoints;
  std::optional<std::string> request_template;
  std::optional<std::map<std::string, std::string>> response_mapping;
  std::vector<DataField> input_data;
  std::vector<DataField> output_data;
  // Non-functional properties as received (arbitrary extra keys of the
  // description document) and flattened to dot-paths for rule evaluation.
  json non_functional_doc = json::object();
  std::map<std::string, json> non_functional;
  std::uint64_t registered_at = 0;

  const DataField* find_input(const std::string& name) const {
    for (const DataField& f : input_data)
      if (f.name == name) return &f;
    return nullptr;
  }
  const DataField* find_output(const std::string& name) const {
    for (const DataField& f : output_data)
      if (f.name == name) return &f;
    return nullptr;
  }
  // Receive URI for choreography data; the engine base is derived from it.
  const Endpoint* first_endpoint() const {
    return endpoints.empty() ? nullptr : &endpoints.front();
  }
  std::string engine_base() const {
    return endpoints.empty() ? std::string() : uri_base(endpoints.front().uri);
  }

  friend bool operator==(const OfferingDescription&,
                         const OfferingDescription&) = default;
};

inline bool evaluate(const OsrExpr& expr, const OfferingDescription& od) {
  return evaluate(expr, od.non_functional);
}

// `@@name@@` placeholders, in order of first appearance.
inline std::vector<std::string> template_placeholders(const std::string& tmpl) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = tmpl.find("@@", pos);
    if (open == std::string::npos) return names;
    std::size_t close = tmpl.find("@@", open + 2);
    if (close == std::string::npos) return names;
    names.push_back(tmpl.substr(open + 2, close - open - 2));
    pos = close + 2;
  }
}

namespace detail {

inline void flatten_property(const std::string& path, const json& value,
                             std::map<std::string, json>& out) {
  if (value.is_object()) {
    for (const auto& [key, child] : value.items())
      flatten_property(path.empty() ? key : path + "." + key, child, out);
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i)
      flatten_property(path + "." + std::to_string(i), value[i], out);
  } else if (!value.is_null()) {
    out[path] = value;
  }
}

inline void check_unique_ports(const std::vector<DataField>& fields,
                               const std::string& direction,
                               const std::string& owner) {
  std::set<std::string> seen;
  for (const DataField& f : fields) {
    if (f.name.empty())
      fail(ErrorKind::Invariant, owner + ": empty " + direction + " port name");
    if (f.value_type.empty())
      fail(ErrorKind::Invariant,
           owner + ": " + direction + " port '" + f.name + "' has empty valueType");
    if (!seen.insert(f.name).second)
      fail(ErrorKind::Invariant,
           owner + ": duplicate " + direction + " port '" + f.name + "'");
  }
}

}  // namespace detail

inline void validate_offering(const OfferingDescription& od) {
  const std::string who = "offering '" + od.local_id + "'";
  if (od.local_id.empty()) fail(ErrorKind::Invariant, "offering: empty localId");
  if (od.category.empty()) fail(ErrorKind::Invariant, who + ": empty category");
  detail::check_unique_ports(od.input_data, "input", who);
  detail::check_unique_ports(od.output_data, "output", who);
  for (const Endpoint& ep : od.endpoints)
    if (!is_absolute_http_uri(ep.uri))
      fail(ErrorKind::Invariant,
           who + ": endpoint uri '" + ep.uri + "' is not an absolute http URI");
  if (od.request_template)
    for (const std::string& name : template_placeholders(*od.request_template))
      if (!od.find_input(name))
        fail(ErrorKind::Invariant, who + ": requestTemplate placeholder '@@" +
                                       name + "@@' names no input port");
  if (od.response_mapping)
    for (const auto& [port, path] : *od.response_mapping)
      if (!od.find_output(port))
        fail(ErrorKind::Invariant,
             who + ": responseMapping key '" + port + "' names no output port");
}

inline json data_fields_to_json(const std::vector<DataField>& fields) {
  json arr = json::array();
  for (const DataField& f : fields)
    arr.push_back({{"name", f.name}, {"valueType", f.value_type}});
  return arr;
}

inline std::vector<DataField> data_fields_from_json(const json& arr,
                                                    const std::string& where) {
  if (!arr.is_array()) fail(ErrorKind::Parse, where + " must be an array");
  std::vector<DataField> out;
  for (const json& item : arr) {
    if (!item.is_object() || !item.contains("name") || !item.contains("valueType"))
      fail(ErrorKind::Parse, where + " entries need 'name' and 'valueType'");
    out.push_back({item.at("name").get<std::string>(),
                   item.at("valueType").get<std::string>()});
  }
  return out;
}

// Offering description documents carry the fixed keys below; every other
// key is a non-functional property. "registeredAt" is reserved for the
// registry and never interpreted as a property.
inline OfferingDescription offering_from_json(const json& doc) {
  if (!doc.is_object()) fail(ErrorKind::Parse, "offering description must be an object");
  static const std::set<std::string> known = {
      "localId",      "category",        "endpoints", "requestTemplate",
      "responseMapping", "inputData",    "outputData", "registeredAt"};
  OfferingDescription od;
  if (!doc.contains("localId") || !doc.at("localId").is_string())
    fail(ErrorKind::Parse, "offering description needs a string 'localId'");
  od.local_id = doc.at("localId").get<std::string>();
  if (!doc.contains("category") || !doc.at("category").is_string())
    fail(ErrorKind::Parse, "offering description needs a string 'category'");
  od.category = doc.at("category").get<std::string>();
  if (doc.contains("endpoints")) {
    if (!doc.at("endpoints").is_array())
      fail(ErrorKind::Parse, "'endpoints' must be an array");
    for (const json& e : doc.at("endpoints")) {
      Endpoint ep;
      ep.uri = e.value("uri", std::string());
      ep.endpoint_type =
          endpoint_type_from_text(e.value("endpointType", std::string("HTTP_POST")));
      ep.accept_type = e.value("acceptType", std::string());
      ep.content_type = e.value("contentType", std::string());
      od.endpoints.push_back(std::move(ep));
    }
  }
  if (doc.contains("requestTemplate") && !doc.at("requestTemplate").is_null())
    od.request_template = doc.at("requestTemplate").get<std::string>();
  if (doc.contains("responseMapping") && !doc.at("responseMapping").is_null()) {
    std::map<std::string, std::string> mapping;
    for (const auto& [port, path] : doc.at("responseMapping").items())
      mapping[port] = path.get<std::string>();
    od.response_mapping = std::move(mapping);
  }
  if (doc.contains("inputData"))
    od.input_data = data_fields_from_json(doc.at("inputData"), "inputData");
  if (doc.contains("outputData"))
    od.output_data = data_fields_from_json(doc.at("outputData"), "outputData");
  if (doc.contains("registeredAt"))
    od.registered_at = doc.at("registeredAt").get<std::uint64_t>();
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) od.non_functional_doc[key] = value;
  detail::flatten_property("", od.non_functional_doc, od.non_functional);
  return od;
}

inline json offering_to_json(const OfferingDescription& od,
                             bool with_registered_at = true) {
  json doc = od.non_functional_doc;
  doc["localId"] = od.local_id;
  doc["category"] = od.category;
  json eps = json::array();
  for (const Endpoint& ep : od.endpoints) {
    json e = {{"uri", ep.uri}, {"endpointType", to_text(ep.endpoint_type)}};
    if (!ep.accept_type.empty()) e["acceptType"] = ep.accept_type;
    if (!ep.content_type.empty()) e["contentType"] = ep.content_type;
    eps.push_back(std::move(e));
  }
  doc["endpoints"] = std::move(eps);
  doc["requestTemplate"] =
      od.request_template ? json(*od.request_template) : json(nullptr);
  doc["responseMapping"] =
      od.response_mapping ? json(*od.response_mapping) : json(nullptr);
  doc["inputData"] = data_fields_to_json(od.input_data);
  doc["outputData"] = data_fields_to_json(od.output_data);
  if (with_registered_at) doc["registeredAt"] = od.registered_at;
  return doc;
}

// ---------------------------------------------------------------------------
// Recipes

struct Ingredient {
  std::string id;
  Uri category;
  std::vector<DataField> inputs;
  std::vector<DataField> outputs;

  const DataField* find_input(const std::string& name) const {
    for (const DataField& f : inputs)
      if (f.name == name) return &f;
    return nullptr;
  }
  const DataField* find_output(const std::string& name) const {
    for (const DataField& f : outputs)
      if (f.name == name) return &f;
    return nullptr;
  }

  friend bool operator==(const Ingredient&, const Ingredient&) = default;
};

struct Interaction {
  std::string source_ingredient;
  std::string source_output;
  std::string target_ingredient;
  std::string target_input;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

struct Recipe {
  std::string id;
  std::vector<Ingredient> ingredients;
  std::vector<Interaction> interactions;

  const Ingredient* find_ingredient(const std::string& ing_id) const {
    for (const Ingredient& i : ingredients)
      if (i.id == ing_id) return &i;
    return nullptr;
  }

  friend bool operator==(const Recipe&, const Recipe&) = default;
};

// Structural checks plus type compatibility of every interaction against
// the deployment graph (source output type ⊑ target input type).
inline void validate_recipe(const Recipe& recipe, const TypeGraph& graph) {
  const std::string who = "recipe '" + recipe.id + "'";
  if (recipe.id.empty()) fail(ErrorKind::Invariant, "recipe: empty id");
  std::set<std::string> ids;
  for (const Ingredient& ing : recipe.ingredients) {
    if (ing.id.empty()) fail(ErrorKind::Invariant, who + ": empty ingredient id");
    if (!ids.insert(ing.id).second)
      fail(ErrorKind::Invariant, who + ": duplicate ingredient '" + ing.id + "'");
    detail::check_unique_ports(ing.inputs, "input", who + " ingredient '" + ing.id + "'");
    detail::check_unique_ports(ing.outputs, "output", who + " ingredient '" + ing.id + "'");
  }
  for (const Interaction& ia : recipe.interactions) {
    if (ia.source_ingredient == ia.target_ingredient)
      fail(ErrorKind::Invariant,
           who + ": interaction self-loop on '" + ia.source_ingredient + "'");
    const Ingredient* src = recipe.find_ingredient(ia.source_ingredient);
    const Ingredient* dst = recipe.find_ingredient(ia.target_ingredient);
    if (!src)
      fail(ErrorKind::Invariant, who + ": unknown interaction source ingredient '" +
                                     ia.source_ingredient + "'");
    if (!dst)
      fail(ErrorKind::Invariant, who + ": unknown interaction target ingredient '" +
                                     ia.target_ingredient + "'");
    const DataField* out = src->find_output(ia.source_output);
    const DataField* in = dst->find_input(ia.target_input);
    if (!out)
      fail(ErrorKind::Invariant, who + ": '" + ia.source_ingredient +
                                     "' has no output '" + ia.source_output + "'");
    if (!in)
      fail(ErrorKind::Invariant, who + ": '" + ia.target_ingredient +
                                     "' has no input '" + ia.target_input + "'");
    if (!graph.is_subclass_of(out->value_type, in->value_type))
      fail(ErrorKind::Invariant,
           who + ": interaction " + ia.source_ingredient + "." + ia.source_output +
               " -> " + ia.target_ingredient + "." + ia.target_input +
               " is type-incompatible (" + out->value_type + " is not a subclass of " +
               in->value_type + ")");
  }
}

namespace detail {

inline std::pair<std::string, std::string> split_port_ref(const std::string& ref,
                                                          const std::string& where) {
  std::size_t dot = ref.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == ref.size())
    fail(ErrorKind::Parse, where + ": port reference '" + ref +
                               "' must look like 'ingredient.port'");
  return {ref.substr(0, dot), ref.substr(dot + 1)};
}

}  // namespace detail

inline Recipe recipe_from_json(const json& doc) {
  if (!doc.is_object()) fail(ErrorKind::Parse, "recipe must be an object");
  Recipe recipe;
  recipe.id = doc.value("id", std::string());
  if (recipe.id.empty()) fail(ErrorKind::Parse, "recipe needs a nonempty 'id'");
  for (const json& i : doc.value("ingredients", json::array())) {
    Ingredient ing;
    ing.id = i.value("id", std::string());
    ing.category = i.value("category", std::string());
    if (i.contains("inputs"))
      ing.inputs = data_fields_from_json(i.at("inputs"), "ingredient inputs");
    if (i.contains("outputs"))
      ing.outputs = data_fields_from_json(i.at("outputs"), "ingredient outputs");
    recipe.ingredients.push_back(std::move(ing));
  }
  for (const json& ia : doc.value("interactions", json::array())) {
    if (!ia.contains("from") || !ia.contains("to"))
      fail(ErrorKind::Parse, "recipe interactions need 'from' and 'to'");
    auto [src, out] = detail::split_port_ref(ia.at("from").get<std::string>(),
                                             "recipe '" + recipe.id + "'");
    auto [dst, in] = detail::split_port_ref(ia.at("to").get<std::string>(),
                                            "recipe '" + recipe.id + "'");
    recipe.interactions.push_back({src, out, dst, in});
  }
  return recipe;
}

inline json recipe_to_json(const Recipe& recipe) {
  json doc;
  doc["id"] = recipe.id;
  json ings = json::array();
  for (const Ingredient& ing : recipe.ingredients)
    ings.push_back({{"id", ing.id},
                    {"category", ing.category},
                    {"inputs", data_fields_to_json(ing.inputs)},
                    {"outputs", data_fields_to_json(ing.outputs)}});
  doc["ingredients"] = std::move(ings);
  json ias = json::array();
  for (const Interaction& ia : recipe.interactions)
    ias.push_back({{"from", ia.source_ingredient + "." + ia.source_output},
                   {"to", ia.target_ingredient + "." + ia.target_input}});
  doc["interactions"] = std::move(ias);
  return doc;
}

// ---------------------------------------------------------------------------
// Runtime configurations

// How an admitted offering's ports map onto its ingredient's ports.
struct PortBinding {
  std::map<std::string, std::string> input_map;   // offering input -> ingredient input
  std::map<std::string, std::string> output_map;  // offering output -> ingredient output

  friend bool operator==(const PortBinding&, const PortBinding&) = default;
};

struct IrcMember {
  std::string offering_id;
  PortBinding binding;

  friend bool operator==(const IrcMember&, const IrcMember&) = default;
};

struct Irc {
  std::string id;
  std::string ingredient_id;
  OsrExpr osr = OsrExpr::always_true();
  std::uint32_t min_cardinality = 0;
  std::optional<std::uint32_t> max_cardinality;  // nullopt = unbounded
  std::vector<IrcMember> members;                // ordered by registeredAt

  bool at_capacity() const {
    return max_cardinality && members.size() >= *max_cardinality;
  }
  bool has_member(const std::string& offering_id) const {
    return std::any_of(members.begin(), members.end(), [&](const IrcMember& m) {
      return m.offering_id == offering_id;
    });
  }
  bool meets_minimum() const { return members.size() >= min_cardinality; }

  friend bool operator==(const Irc&, const Irc&) = default;
};

struct Rrc {
  std::string id;
  std::string recipe_id;
  std::vector<Irc> ircs;  // one per recipe ingredient, recipe order
  bool active = false;

  Irc* find_irc(const std::string& irc_id) {
    for (Irc& irc : ircs)
      if (irc.id == irc_id) return &irc;
    return nullptr;
  }
  const Irc* find_irc(const std::string& irc_id) const {
    for (const Irc& irc : ircs)
      if (irc.id == irc_id) return &irc;
    return nullptr;
  }
  Irc* irc_for_ingredient(const std::string& ingredient_id) {
    for (Irc& irc : ircs)
      if (irc.ingredient_id == ingredient_id) return &irc;
    return nullptr;
  }
  const Irc* irc_for_ingredient(const std::string& ingredient_id) const {
    for (const Irc& irc : ircs)
      if (irc.ingredient_id == ingredient_id) return &irc;
    return nullptr;
  }

  friend bool operator==(const Rrc&, const Rrc&) = default;
};

inline json port_binding_to_json(const PortBinding& b) {
  return {{"inputs", b.input_map}, {"outputs", b.output_map}};
}

inline PortBinding port_binding_from_json(const json& doc) {
  PortBinding b;
  if (doc.contains("inputs"))
    b.input_map = doc.at("inputs").get<std::map<std::string, std::string>>();
  if (doc.contains("outputs"))
    b.output_map = doc.at("outputs").get<std::map<std::string, std::string>>();
  return b;
}

inline json irc_to_json(const Irc& irc) {
  json members = json::array();
  for (const IrcMember& m : irc.members)
    members.push_back({{"offering", m.offering_id},
                       {"binding", port_binding_to_json(m.binding)}});
  return {{"id", irc.id},
          {"ingredientId", irc.ingredient_id},
          {"osr", serialize_osr(irc.osr)},
          {"min", irc.min_cardinality},
          {"max", irc.max_cardinality ? json(*irc.max_cardinality) : json(nullptr)},
          {"members", std::move(members)}};
}

inline Irc irc_from_json(const json& doc) {
  Irc irc;
  irc.id = doc.at("id").get<std::string>();
  irc.ingredient_id = doc.at("ingredientId").get<std::string>();
  irc.osr = parse_osr(doc.value("osr", std::string()));
  irc.min_cardinality = doc.value("min", 0u);
  if (doc.contains("max") && !doc.at("max").is_null())
    irc.max_cardinality = doc.at("max").get<std::uint32_t>();
  for (const json& m : doc.value("members", json::array()))
    irc.members.push_back({m.at("offering").get<std::string>(),
                           port_binding_from_json(m.value("binding", json::object()))});
  return irc;
}

inline json rrc_to_json(const Rrc& rrc) {
  json ircs = json::array();
  for (const Irc& irc : rrc.ircs) ircs.push_back(irc_to_json(irc));
  return {{"id", rrc.id},
          {"recipeId", rrc.recipe_id},
          {"active", rrc.active},
          {"ircs", std::move(ircs)}};
}

inline Rrc rrc_from_json(const json& doc) {
  Rrc rrc;
  rrc.id = doc.at("id").get<std::string>();
  rrc.recipe_id = doc.at("recipeId").get<std::string>();
  rrc.active = doc.value("active", false);
  for (const json& i : doc.value("ircs", json::array()))
    rrc.ircs.push_back(irc_from_json(i));
  return rrc;
}

// ---------------------------------------------------------------------------
// Interaction descriptors

// Per-offering wiring within one RRC: where each output port's values go,
// and which peers are expected to send to which of our input ports.
struct InteractionDescriptor {
  std::string offering;
  std::string rrc;
  // output port -> target endpoint URI -> target input port
  std::map<std::string, std::map<std::string, std::string>> outputs;
  // source offering id -> our input ports fed by it
  std::map<std::string, std::vector<std::string>> inputs;

  bool empty() const { return outputs.empty() && inputs.empty(); }

  friend bool operator==(const InteractionDescriptor&,
                         const InteractionDescriptor&) = default;
};

inline json indes_to_json(const InteractionDescriptor& d) {
  return {{"offering", d.offering},
          {"recipeRuntimeConfiguration", d.rrc},
          {"outputs", d.outputs},
          {"inputs", d.inputs}};
}

inline InteractionDescriptor indes_from_json(const json& doc) {
  InteractionDescriptor d;
  d.offering = doc.at("offering").get<std::string>();
  d.rrc = doc.at("recipeRuntimeConfiguration").get<std::string>();
  if (doc.contains("outputs"))
    d.outputs = doc.at("outputs")
                    .get<std::map<std::string, std::map<std::string, std::string>>>();
  if (doc.contains("inputs"))
    d.inputs = doc.at("inputs").get<std::map<std::string, std::vector<std::string>>>();
  return d;
}

// ---------------------------------------------------------------------------
// Controller outcome reports

struct JoinedIrc {
  std::string rrc_id;
  std::string irc_id;

  friend bool operator==(const JoinedIrc&, const JoinedIrc&) = default;
};

struct RegistrationOutcome {
  std::string offering_id;
  std::vector<JoinedIrc> joined;
  std::vector<std::string> activated_rrcs;
  std::vector<std::string> pushed_to;
  std::vector<std::string> push_failures;
};

struct Replacement {
  std::string irc_id;
  std::string offering_id;
};

struct RemovalOutcome {
  std::string offering_id;
  std::vector<JoinedIrc> removed_from;
  std::vector<Replacement> replacements;
  std::vector<std::string> deactivated_rrcs;
  std::vector<std::string> pushed_to;
  std::vector<std::string> push_failures;
};

struct SeedOutcome {
  std::string rrc_id;
  std::vector<Replacement> joined;  // (irc, offering) pairs in admission order
  bool activated = false;
  std::vector<std::string> pushed_to;
  std::vector<std::string> push_failures;
};

struct OsrChangeOutcome {
  std::string irc_id;
  std::vector<std::string> evicted;
  std::vector<std::string> admitted;
  std::vector<std::string> activated_rrcs;
  std::vector<std::string> deactivated_rrcs;
  std::vector<std::string> pushed_to;
  std::vector<std::string> push_failures;
};

inline json joined_to_json(const std::vector<JoinedIrc>& joined) {
  json arr = json::array();
  for (const JoinedIrc& j : joined)
    arr.push_back({{"rrc", j.rrc_id}, {"irc", j.irc_id}});
  return arr;
}

inline json to_json(const RegistrationOutcome& o) {
  return {{"offeringId", o.offering_id},
          {"joined", joined_to_json(o.joined)},
          {"activatedRrcs", o.activated_rrcs},
          {"pushedTo", o.pushed_to},
          {"pushFailures", o.push_failures}};
}

inline json to_json(const RemovalOutcome& o) {
  json repl = json::array();
  for (const Replacement& r : o.replacements)
    repl.push_back({{"irc", r.irc_id}, {"offering", r.offering_id}});
  return {{"offeringId", o.offering_id},
          {"removedFrom", joined_to_json(o.removed_from)},
          {"replacements", std::move(repl)},
          {"deactivatedRrcs", o.deactivated_rrcs},
          {"pushedTo", o.pushed_to},
          {"pushFailures", o.push_failures}};
}

inline json to_json(const SeedOutcome& o) {
  json joined = json::array();
  for (const Replacement& r : o.joined)
    joined.push_back({{"irc", r.irc_id}, {"offering", r.offering_id}});
  return {{"rrcId", o.rrc_id},
          {"joined", std::move(joined)},
          {"activated", o.activated},
          {"pushedTo", o.pushed_to},
          {"pushFailures", o.push_failures}};
}

inline json to_json(const OsrChangeOutcome& o) {
  return {{"ircId", o.irc_id},
          {"evicted", o.evicted},
          {"admitted", o.admitted},
          {"activatedRrcs", o.activated_rrcs},
          {"deactivatedRrcs", o.deactivated_rrcs},
          {"pushedTo", o.pushed_to},
          {"pushFailures", o.push_failures}};
}

}  // namespace choreo
