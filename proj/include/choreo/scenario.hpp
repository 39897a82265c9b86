#pragma once

// Executable scenarios: a deployment description (ontology, recipes, RRC
// specs, devices) plus a logical-step event script. Runs single-threaded
// over the in-process mock network, so two runs of the same scenario
// produce identical transcripts.

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "choreo/controller.hpp"
#include "choreo/engine.hpp"
#include "choreo/mocknet.hpp"

namespace choreo {

struct DeviceSpec {
  OfferingDescription offering;
  std::string handler;  // HandlerRegistry name; empty = no implementation
  int register_at = 0;  // logical step of automatic registration
};

struct RrcSpec {
  std::string id;  // empty = generated
  std::string recipe_id;
  std::map<std::string, Registry::IrcSpec> ingredients;
};

struct ScenarioEvent {
  int at = 0;
  std::string action;  // register | deregister | emit | assert | stopController
  json fields;
};

struct Scenario {
  std::string ontology_document;
  std::vector<Recipe> recipes;
  std::vector<RrcSpec> rrcs;
  std::vector<DeviceSpec> devices;
  std::vector<ScenarioEvent> events;
};

inline Scenario scenario_from_json(const json& doc,
                                   const std::filesystem::path& base_dir) {
  auto read_file = [&](const std::string& rel) {
    std::filesystem::path p = base_dir / rel;
    std::ifstream in(p);
    if (!in) fail(ErrorKind::NotFound, "scenario: file not found: " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  Scenario s;
  // "ontology" names a file relative to the scenario; "ontologyInline"
  // carries the document text directly.
  if (doc.contains("ontology"))
    s.ontology_document = read_file(doc.at("ontology").get<std::string>());
  else if (doc.contains("ontologyInline"))
    s.ontology_document = doc.at("ontologyInline").get<std::string>();
  for (const json& r : doc.value("recipes", json::array()))
    s.recipes.push_back(
        recipe_from_json(r.is_string() ? json::parse(read_file(r.get<std::string>())) : r));
  for (const json& r : doc.value("rrcs", json::array())) {
    RrcSpec spec;
    spec.id = r.value("id", std::string());
    spec.recipe_id = r.at("recipeId").get<std::string>();
    for (const auto& [ing, cfg] : r.value("ingredients", json::object()).items()) {
      Registry::IrcSpec irc;
      irc.osr = parse_osr(cfg.value("osr", std::string()));
      irc.min = cfg.value("min", 0u);
      if (cfg.contains("max") && !cfg.at("max").is_null())
        irc.max = cfg.at("max").get<std::uint32_t>();
      spec.ingredients[ing] = std::move(irc);
    }
    s.rrcs.push_back(std::move(spec));
  }
  for (const json& d : doc.value("devices", json::array())) {
    DeviceSpec dev;
    const json& od = d.at("offering");
    dev.offering = offering_from_json(
        od.is_string() ? json::parse(read_file(od.get<std::string>())) : od);
    dev.handler = d.value("handler", std::string());
    dev.register_at = d.value("registerAt", 0);
    s.devices.push_back(std::move(dev));
  }
  int last_at = -1;
  for (const json& e : doc.value("events", json::array())) {
    ScenarioEvent ev;
    ev.at = e.at("at").get<int>();
    ev.action = e.at("action").get<std::string>();
    ev.fields = e;
    if (ev.at <= last_at)
      fail(ErrorKind::Invariant, "scenario: event steps must be strictly increasing");
    last_at = ev.at;
    s.events.push_back(std::move(ev));
  }
  return s;
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::NotFound, "scenario file not found: " + path);
  json doc = json::parse(in);
  return scenario_from_json(doc, std::filesystem::path(path).parent_path());
}

struct ScenarioResult {
  json transcript = json::array();
  json assertions = json::array();
  int failed_assertions = 0;
  json registry_snapshot;
};

class ScenarioRunner {
 public:
  explicit ScenarioRunner(Scenario scenario) : scenario_(std::move(scenario)) {}

  ScenarioResult run() {
    auto graph = std::make_shared<TypeGraph>(
        load_type_graph(scenario_.ontology_document));
    net_ = std::make_unique<MockNetwork>();
    controller_ = std::make_unique<Controller>(graph, *net_);
    for (const Recipe& r : scenario_.recipes) controller_->add_recipe(r);
    for (const RrcSpec& spec : scenario_.rrcs)
      controller_->create_rrc(spec.recipe_id, spec.ingredients,
                              spec.id.empty() ? std::nullopt
                                              : std::optional<std::string>(spec.id));
    for (const DeviceSpec& dev : scenario_.devices) {
      auto engine = std::make_unique<Engine>(
          dev.offering, *net_,
          dev.handler.empty() ? LocalHandler{}
                              : HandlerRegistry::instance().find(dev.handler));
      engines_[dev.offering.local_id] = std::move(engine);
    }

    // Devices referenced by an explicit register event wait for it; everyone
    // else auto-registers at their registerAt step.
    std::set<std::string> scripted;
    for (const ScenarioEvent& ev : scenario_.events)
      if (ev.action == "register")
        scripted.insert(ev.fields.at("device").get<std::string>());

    int last_step = 0;
    for (const ScenarioEvent& ev : scenario_.events) last_step = ev.at;
    for (const DeviceSpec& dev : scenario_.devices)
      last_step = std::max(last_step, dev.register_at);

    ScenarioResult result;
    std::size_t next_event = 0;
    for (int step = 0; step <= last_step; ++step) {
      net_->set_step(step);
      for (const DeviceSpec& dev : scenario_.devices)
        if (dev.register_at == step && !scripted.count(dev.offering.local_id))
          do_register(dev.offering.local_id);
      while (next_event < scenario_.events.size() &&
             scenario_.events[next_event].at == step) {
        apply(scenario_.events[next_event], result);
        ++next_event;
      }
    }
    result.transcript = net_->transcript();
    if (controller_) result.registry_snapshot = controller_->snapshot();
    return result;
  }

  Controller* controller() { return controller_.get(); }
  MockNetwork& net() { return *net_; }
  Engine* engine(const std::string& id) {
    auto it = engines_.find(id);
    return it == engines_.end() ? nullptr : it->second.get();
  }

 private:
  void do_register(const std::string& device_id) {
    auto it = engines_.find(device_id);
    if (it == engines_.end())
      fail(ErrorKind::NotFound, "scenario: unknown device '" + device_id + "'");
    if (!controller_)
      fail(ErrorKind::Config, "scenario: register after stopController");
    net_->attach(*it->second);
    net_->record({{"type", "register"}, {"device", device_id}});
    controller_->register_offering(it->second->offering());
  }

  void apply(const ScenarioEvent& ev, ScenarioResult& result) {
    if (ev.action == "register") {
      do_register(ev.fields.at("device").get<std::string>());
    } else if (ev.action == "deregister") {
      if (!controller_)
        fail(ErrorKind::Config, "scenario: deregister after stopController");
      std::string device = ev.fields.at("device").get<std::string>();
      bool replace = ev.fields.value("replace", true);
      net_->record({{"type", "deregister"}, {"device", device}});
      controller_->deregister_offering(device, replace);
      net_->detach(device);
    } else if (ev.action == "emit") {
      std::string device = ev.fields.at("device").get<std::string>();
      auto it = engines_.find(device);
      if (it == engines_.end())
        fail(ErrorKind::NotFound, "scenario: unknown device '" + device + "'");
      net_->record({{"type", "emit"},
                    {"device", device},
                    {"port", ev.fields.at("port").get<std::string>()},
                    {"value", ev.fields.at("value")}});
      it->second->emit(ev.fields.at("port").get<std::string>(),
                       ev.fields.at("value"));
    } else if (ev.action == "assert") {
      check(ev, result);
    } else if (ev.action == "stopController") {
      // The wiring must keep working without it.
      net_->record({{"type", "stopController"}});
      controller_.reset();
    } else {
      fail(ErrorKind::Parse, "scenario: unknown action '" + ev.action + "'");
    }
  }

  void check(const ScenarioEvent& ev, ScenarioResult& result) {
    const json& expect = ev.fields.at("expect");
    std::string kind = expect.at("kind").get<std::string>();
    json actual;
    bool ok = false;
    if (kind == "deliveryCount") {
      long n = net_->count_deliveries(expect.value("device", ""),
                                      expect.value("port", ""),
                                      expect.value("fromStep", -1));
      actual = n;
      ok = n == expect.at("count").get<long>();
    } else if (kind == "rrcActive") {
      const Rrc* rrc = controller_
                           ? controller_->registry().find_rrc(
                                 expect.at("rrc").get<std::string>())
                           : nullptr;
      actual = rrc ? json(rrc->active) : json(nullptr);
      ok = rrc && rrc->active == expect.at("value").get<bool>();
    } else if (kind == "members") {
      actual = json::array();
      if (controller_) {
        const Rrc* rrc =
            controller_->registry().find_rrc(expect.at("rrc").get<std::string>());
        const Irc* irc =
            rrc ? rrc->irc_for_ingredient(expect.at("ingredient").get<std::string>())
                : nullptr;
        if (irc)
          for (const IrcMember& m : irc->members) actual.push_back(m.offering_id);
      }
      ok = actual == expect.at("offerings");
    } else {
      fail(ErrorKind::Parse, "scenario: unknown expectation kind '" + kind + "'");
    }
    json report = {{"step", ev.at},
                   {"expect", expect},
                   {"actual", actual},
                   {"ok", ok}};
    net_->record({{"type", "assert"}, {"ok", ok}, {"expect", expect}, {"actual", actual}});
    result.assertions.push_back(std::move(report));
    if (!ok) ++result.failed_assertions;
  }

  Scenario scenario_;
  std::unique_ptr<MockNetwork> net_;
  std::unique_ptr<Controller> controller_;
  std::map<std::string, std::unique_ptr<Engine>> engines_;
};

inline ScenarioResult run_scenario(Scenario scenario) {
  ScenarioRunner runner(std::move(scenario));
  return runner.run();
}

}  // namespace choreo
