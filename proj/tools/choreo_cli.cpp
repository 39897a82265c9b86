// choreo: run the controller or an engine, manage recipes and runtime
// configurations over the controller API, execute scenarios, and benchmark
// admission latency.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "choreo/bench.hpp"
#include "choreo/http.hpp"
#include "choreo/scenario.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

choreo::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) choreo::fail(choreo::ErrorKind::NotFound, "file not found: " + path);
  return choreo::json::parse(in);
}

std::pair<std::string, int> split_listen(const std::string& listen) {
  auto colon = listen.rfind(':');
  if (colon == std::string::npos)
    choreo::fail(choreo::ErrorKind::Config,
                 "listen address must look like host:port, got '" + listen + "'");
  return {listen.substr(0, colon), std::stoi(listen.substr(colon + 1))};
}

// POSTs/PUTs against the controller API, printing the JSON reply.
int call_controller(const std::string& base, const std::string& method,
                    const std::string& path, const std::string& body) {
  httplib::Client client(base);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(10, 0);
  httplib::Result res;
  if (method == "POST")
    res = client.Post(path, body, "application/json");
  else if (method == "PUT")
    res = client.Put(path, body, "application/json");
  else
    res = client.Get(path);
  if (!res) {
    std::cerr << "error: cannot reach controller at " << base << "\n";
    return 1;
  }
  std::cout << res->body << "\n";
  return res->status >= 200 && res->status < 300 ? 0 : 1;
}

int run_controller_serve(const std::string& listen, const std::string& ontology,
                         const std::string& snapshot) {
  auto graph = std::make_shared<choreo::TypeGraph>(
      ontology.empty() ? choreo::TypeGraph{}
                       : choreo::load_type_graph_file(ontology));
  choreo::HttpTransport transport;
  choreo::Controller controller(graph, transport);
  if (!snapshot.empty()) {
    std::ifstream in(snapshot);
    if (in) {
      controller.restore(choreo::json::parse(in));
      std::cerr << "controller: restored snapshot from " << snapshot << "\n";
    }
  }
  auto [host, port] = split_listen(listen);
  choreo::ControllerServer server(controller);
  int bound = server.start(host, port);
  std::cerr << "controller: listening on " << host << ":" << bound << "\n";
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  if (!snapshot.empty()) {
    std::ofstream out(snapshot);
    out << controller.snapshot().dump(2) << "\n";
    std::cerr << "controller: snapshot written to " << snapshot << "\n";
  }
  return 0;
}

int run_engine(const std::string& offering_path, const std::string& controller_base,
               const std::string& listen, const std::string& handler_name) {
  choreo::OfferingDescription od =
      choreo::offering_from_json(read_json_file(offering_path));
  choreo::HttpTransport transport;
  choreo::LocalHandler handler;
  if (!handler_name.empty())
    handler = choreo::HandlerRegistry::instance().find(handler_name);
  choreo::Engine engine(od, transport, handler);
  engine.set_remote_caller(choreo::http_remote_caller());
  auto [host, port] = split_listen(listen);
  choreo::EngineServer server(engine);
  int bound = server.start(host, port);
  std::cerr << "engine '" << od.local_id << "': listening on " << host << ":"
            << bound << "\n";
  choreo::engine_startup_sync(engine, controller_base);
  std::cerr << "engine '" << od.local_id << "': registered at " << controller_base
            << "\n";
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return 0;
}

int run_scenario_cmd(const std::string& path, bool verbose) {
  choreo::ScenarioResult result =
      choreo::run_scenario(choreo::load_scenario_file(path));
  if (verbose) std::cout << result.transcript.dump(2) << "\n";
  for (const choreo::json& a : result.assertions) {
    bool ok = a.value("ok", false);
    std::cout << (ok ? "ok  " : "FAIL") << " step " << a.value("step", 0)
              << " expect " << a.at("expect").dump() << " actual "
              << a.at("actual").dump() << "\n";
  }
  std::cout << result.assertions.size() << " assertion(s), "
            << result.failed_assertions << " failed\n";
  return result.failed_assertions == 0 ? 0 : 1;
}

// Validated locally before the controller sees it, so obvious mistakes are
// reported without a round trip.
choreo::json load_rrc_spec(const std::string& path) {
  choreo::json body = read_json_file(path);
  for (const auto& [ing, cfg] :
       body.value("ingredients", choreo::json::object()).items()) {
    choreo::parse_osr(cfg.value("osr", std::string()));
    if (cfg.contains("max") && !cfg.at("max").is_null() &&
        cfg.value("min", 0u) > cfg.at("max").get<std::uint32_t>())
      choreo::fail(choreo::ErrorKind::Invariant,
                   "ingredient '" + ing + "': min cardinality " +
                       std::to_string(cfg.value("min", 0u)) + " exceeds max " +
                       cfg.at("max").dump());
  }
  return body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recipe-driven IoT choreographies: controller, engine and harness"};
  app.require_subcommand(1);

  std::string controller_url = "http://127.0.0.1:8080";
  std::string listen = "127.0.0.1:8080";
  std::string ontology_path, snapshot_path, offering_path, handler_name;
  std::string file_arg, id_arg, osr_text, out_path = "bench.csv";
  bool verbose = false;
  int rrcs = 700, reps = 20;

  auto* controller = app.add_subcommand("controller", "Controller service");
  auto* serve = controller->add_subcommand("serve", "Run the controller API");
  serve->add_option("--listen", listen, "host:port to listen on")
      ->capture_default_str();
  serve->add_option("--ontology", ontology_path, "ontology file (subClassOf lines)");
  serve->add_option("--snapshot", snapshot_path,
                    "registry snapshot path (loaded at start, written on shutdown)");

  auto* engine = app.add_subcommand("engine", "Device engine");
  auto* engine_run = engine->add_subcommand("run", "Run an engine for one offering");
  engine_run->add_option("--offering", offering_path, "offering description file")
      ->required();
  engine_run->add_option("--controller", controller_url, "controller base URL")
      ->capture_default_str();
  std::string engine_listen = "127.0.0.1:9000";
  engine_run->add_option("--listen", engine_listen, "host:port to listen on")
      ->capture_default_str();
  engine_run->add_option("--handler", handler_name,
                         "local handler name (omit for template-driven devices)");

  auto* recipe = app.add_subcommand("recipe", "Recipe management");
  auto* recipe_add = recipe->add_subcommand("add", "Upload a recipe file");
  recipe_add->add_option("file", file_arg, "recipe JSON file")->required();
  recipe_add->add_option("--controller", controller_url)->capture_default_str();

  auto* rrc = app.add_subcommand("rrc", "Runtime configurations");
  auto* rrc_create = rrc->add_subcommand("create", "Instantiate a recipe");
  rrc_create->add_option("file", file_arg, "rrc spec JSON file")->required();
  rrc_create->add_option("--controller", controller_url)->capture_default_str();
  auto* rrc_seed = rrc->add_subcommand("seed", "Populate an RRC from the pool");
  rrc_seed->add_option("id", id_arg, "rrc id")->required();
  rrc_seed->add_option("--controller", controller_url)->capture_default_str();

  auto* osr = app.add_subcommand("osr", "Selection rules");
  auto* osr_set = osr->add_subcommand("set", "Replace an IRC's selection rule");
  osr_set->add_option("id", id_arg, "irc id")->required();
  osr_set->add_option("rule", osr_text, "rule text (canonical grammar)")->required();
  osr_set->add_option("--controller", controller_url)->capture_default_str();

  auto* scenario = app.add_subcommand("scenario", "Scenario harness");
  auto* scenario_run = scenario->add_subcommand("run", "Execute a scenario file");
  scenario_run->add_option("file", file_arg, "scenario JSON file")->required();
  scenario_run->add_flag("--verbose", verbose, "print the full transcript");

  auto* bench = app.add_subcommand("bench", "Scaling benchmark");
  auto* bench_run = bench->add_subcommand("run", "Measure admission latency");
  bench_run->add_option("--rrcs", rrcs, "largest RRC count (swept in steps of 7)")
      ->capture_default_str();
  bench_run->add_option("--reps", reps, "repetitions per point")
      ->capture_default_str();
  bench_run->add_option("--out", out_path, "CSV output path")->capture_default_str();

  auto* registry = app.add_subcommand("registry", "Registry access");
  auto* registry_dump = registry->add_subcommand("dump", "Print offerings and RRCs");
  registry_dump->add_option("--controller", controller_url)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (serve->parsed())
      return run_controller_serve(listen, ontology_path, snapshot_path);
    if (engine_run->parsed())
      return run_engine(offering_path, controller_url, engine_listen, handler_name);
    if (recipe_add->parsed())
      return call_controller(controller_url, "POST", "/recipes",
                             read_json_file(file_arg).dump());
    if (rrc_create->parsed())
      return call_controller(controller_url, "POST", "/rrcs",
                             load_rrc_spec(file_arg).dump());
    if (rrc_seed->parsed())
      return call_controller(controller_url, "POST", "/rrcs/" + id_arg + "/seed", "");
    if (osr_set->parsed()) {
      choreo::parse_osr(osr_text);  // reject malformed rules locally
      return call_controller(controller_url, "PUT", "/ircs/" + id_arg + "/osr",
                             choreo::json{{"osr", osr_text}}.dump());
    }
    if (scenario_run->parsed()) return run_scenario_cmd(file_arg, verbose);
    if (bench_run->parsed()) {
      choreo::BenchmarkSpec spec{choreo::bench_range(rrcs), reps, out_path};
      auto points = choreo::run_benchmark(spec);
      std::cout << "rrcCount,medianMs,p95Ms\n";
      for (const auto& p : points)
        std::cout << p.rrc_count << "," << p.median_ms << "," << p.p95_ms << "\n";
      std::cerr << "wrote " << out_path << "\n";
      return 0;
    }
    if (registry_dump->parsed()) {
      httplib::Client client(controller_url);
      client.set_connection_timeout(5, 0);
      auto offerings = client.Get("/offerings");
      auto rrcs_res = client.Get("/rrcs");
      if (!offerings || !rrcs_res) {
        std::cerr << "error: cannot reach controller at " << controller_url << "\n";
        return 1;
      }
      choreo::json dump = {
          {"offerings", choreo::json::parse(offerings->body)},
          {"rrcs", choreo::json::parse(rrcs_res->body)}};
      std::cout << dump.dump(2) << "\n";
      return 0;
    }
  } catch (const choreo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
