#pragma once

// The coordination service: admits and removes offerings, keeps runtime
// configurations and their activation consistent, generates interaction
// descriptors, and pushes them to the affected engines.
//
// All mutations run one at a time under a single lock, in arrival order.
// Descriptor pushes happen after the state transition commits; a failed
// push never rolls the state back (engines refetch their descriptors on
// reconnect).

#include <chrono>
#include <memory>
#include <mutex>
#include <set>
#include <thread>

#include "choreo/matchmaker.hpp"
#include "choreo/registry.hpp"
#include "choreo/transport.hpp"

namespace choreo {

struct ControllerOptions {
  int push_attempts = 3;
  int push_backoff_ms = 200;  // doubles per retry
};

class Controller {
 public:
  Controller(std::shared_ptr<const TypeGraph> graph, IndesTransport& transport,
             ControllerOptions options = {})
      : graph_(std::move(graph)), transport_(transport), options_(options) {
    if (!graph_) graph_ = std::make_shared<TypeGraph>();
  }

  const TypeGraph& graph() const { return *graph_; }

  // Unlocked access for setup and inspection; concurrent mutation goes
  // through the event operations below.
  Registry& registry() { return registry_; }
  const Registry& registry() const { return registry_; }

  void add_recipe(Recipe recipe) {
    std::lock_guard lock(mutex_);
    registry_.put_recipe(std::move(recipe), *graph_);
  }

  Rrc create_rrc(const std::string& recipe_id,
                 const std::map<std::string, Registry::IrcSpec>& specs,
                 std::optional<std::string> rrc_id = std::nullopt) {
    std::lock_guard lock(mutex_);
    return registry_.create_rrc(recipe_id, specs, std::move(rrc_id));
  }

  // Workflow for a newly connected device: store the description, join every
  // admitting IRC, recompute activation, and push refreshed descriptors to
  // every member whose wiring changed.
  RegistrationOutcome register_offering(OfferingDescription od) {
    std::vector<PushTask> pushes;
    RegistrationOutcome outcome;
    {
      std::lock_guard lock(mutex_);
      const OfferingDescription& stored = registry_.put_offering(std::move(od));
      outcome.offering_id = stored.local_id;
      outcome.joined = find_matching_ircs(stored, registry_, *graph_);
      std::set<std::string> affected;
      for (const JoinedIrc& j : outcome.joined) {
        Rrc* rrc = registry_.find_rrc(j.rrc_id);
        Irc* irc = rrc->find_irc(j.irc_id);
        const Ingredient* ing = ingredient_of(*rrc, *irc);
        registry_.add_member(*irc, stored, bind_ports(stored, *ing, *graph_));
        affected.insert(j.rrc_id);
      }
      refresh_affected(affected, &outcome.activated_rrcs, nullptr, pushes);
    }
    execute(pushes, outcome.pushed_to, outcome.push_failures);
    return outcome;
  }

  // Removes the offering everywhere. With replace=true every vacated IRC is
  // refilled from the pool (smallest registration sequence first); without
  // it the vacancy is left open deliberately.
  RemovalOutcome deregister_offering(const std::string& offering_id, bool replace) {
    std::vector<PushTask> pushes;
    RemovalOutcome outcome;
    {
      std::lock_guard lock(mutex_);
      registry_.remove_offering(offering_id);  // throws on unknown id
      outcome.offering_id = offering_id;
      std::set<std::string> affected;
      for (Rrc& rrc : registry_.rrcs())
        for (Irc& irc : rrc.ircs)
          if (registry_.remove_member(irc, offering_id)) {
            outcome.removed_from.push_back({rrc.id, irc.id});
            affected.insert(rrc.id);
          }
      if (replace) {
        for (const JoinedIrc& vacated : outcome.removed_from) {
          Rrc* rrc = registry_.find_rrc(vacated.rrc_id);
          Irc* irc = rrc->find_irc(vacated.irc_id);
          if (const OfferingDescription* pick = scan_pool(*rrc, *irc)) {
            const Ingredient* ing = ingredient_of(*rrc, *irc);
            registry_.add_member(*irc, *pick, bind_ports(*pick, *ing, *graph_));
            outcome.replacements.push_back({irc->id, pick->local_id});
          }
        }
      }
      refresh_affected(affected, nullptr, &outcome.deactivated_rrcs, pushes);
    }
    execute(pushes, outcome.pushed_to, outcome.push_failures);
    return outcome;
  }

  // Populates an RRC from the already-registered pool, oldest registration
  // first. Idempotent: offerings already admitted are skipped.
  SeedOutcome seed_rrc(const std::string& rrc_id) {
    std::vector<PushTask> pushes;
    SeedOutcome outcome;
    {
      std::lock_guard lock(mutex_);
      Rrc* rrc = registry_.find_rrc(rrc_id);
      if (!rrc) fail(ErrorKind::NotFound, "unknown rrc '" + rrc_id + "'");
      outcome.rrc_id = rrc_id;
      bool was_active = rrc->active;
      for (const OfferingDescription* od : registry_.offerings_by_registration()) {
        for (Irc& irc : rrc->ircs) {
          if (irc.at_capacity() || irc.has_member(od->local_id)) continue;
          const Ingredient* ing = ingredient_of(*rrc, irc);
          if (!ing || !matches(*od, *ing, *graph_) || !evaluate(irc.osr, *od))
            continue;
          registry_.add_member(irc, *od, bind_ports(*od, *ing, *graph_));
          outcome.joined.push_back({irc.id, od->local_id});
        }
      }
      registry_.recompute_active(*rrc);
      outcome.activated = rrc->active && !was_active;
      refresh_rrc(*rrc, pushes);
    }
    execute(pushes, outcome.pushed_to, outcome.push_failures);
    return outcome;
  }

  // Swaps an IRC's selection rule and recomputes its membership from scratch
  // against the pool, so the result is exactly what a fresh instantiation
  // would produce: pool order by registration sequence, capacity-capped.
  OsrChangeOutcome replace_osr(const std::string& irc_id, OsrExpr new_osr) {
    std::vector<PushTask> pushes;
    OsrChangeOutcome outcome;
    {
      std::lock_guard lock(mutex_);
      Rrc* rrc = nullptr;
      Irc* irc = registry_.find_irc(irc_id, &rrc);
      if (!irc) fail(ErrorKind::NotFound, "unknown irc '" + irc_id + "'");
      outcome.irc_id = irc_id;
      irc->osr = std::move(new_osr);

      const Ingredient* ing = ingredient_of(*rrc, *irc);
      std::vector<IrcMember> next;
      for (const OfferingDescription* od : registry_.offerings_by_registration()) {
        if (irc->max_cardinality && next.size() >= *irc->max_cardinality) break;
        if (!ing || !matches(*od, *ing, *graph_) || !evaluate(irc->osr, *od))
          continue;
        next.push_back({od->local_id, bind_ports(*od, *ing, *graph_)});
      }
      for (const IrcMember& m : irc->members)
        if (std::none_of(next.begin(), next.end(), [&](const IrcMember& n) {
              return n.offering_id == m.offering_id;
            }))
          outcome.evicted.push_back(m.offering_id);
      for (const IrcMember& n : next)
        if (!irc->has_member(n.offering_id))
          outcome.admitted.push_back(n.offering_id);
      irc->members = std::move(next);

      refresh_affected({rrc->id}, &outcome.activated_rrcs,
                       &outcome.deactivated_rrcs, pushes);
    }
    execute(pushes, outcome.pushed_to, outcome.push_failures);
    return outcome;
  }

  // Derives one descriptor per member of an active RRC. For every recipe
  // interaction and every (sender, receiver) member pair, the sender's
  // bound output port gains an entry to the receiver's first endpoint, and
  // the receiver records the sender as an expected source.
  static std::map<std::string, InteractionDescriptor> generate_indes(
      const Rrc& rrc, const Registry& reg, const TypeGraph& graph) {
    (void)graph;
    const Recipe* recipe = reg.find_recipe(rrc.recipe_id);
    if (!recipe) fail(ErrorKind::NotFound, "unknown recipe '" + rrc.recipe_id + "'");
    std::map<std::string, InteractionDescriptor> out;
    for (const Irc& irc : rrc.ircs)
      for (const IrcMember& m : irc.members) {
        InteractionDescriptor& d = out[m.offering_id];
        d.offering = m.offering_id;
        d.rrc = rrc.id;
      }
    for (const Interaction& ia : recipe->interactions) {
      const Irc* src = rrc.irc_for_ingredient(ia.source_ingredient);
      const Irc* dst = rrc.irc_for_ingredient(ia.target_ingredient);
      if (!src || !dst) continue;
      for (const IrcMember& a : src->members) {
        std::vector<std::string> out_ports;
        for (const auto& [offering_port, ingredient_port] : a.binding.output_map)
          if (ingredient_port == ia.source_output) out_ports.push_back(offering_port);
        if (out_ports.empty()) continue;
        for (const IrcMember& b : dst->members) {
          // Lexicographically smallest bound input port receives the data
          // when several offering ports bind the same ingredient input.
          std::string in_port;
          for (const auto& [offering_port, ingredient_port] : b.binding.input_map)
            if (ingredient_port == ia.target_input) {
              in_port = offering_port;
              break;  // input_map is ordered, first hit is smallest
            }
          if (in_port.empty()) continue;
          const OfferingDescription* od_b = reg.find_offering(b.offering_id);
          if (!od_b || od_b->endpoints.empty())
            fail(ErrorKind::Config, "offering '" + b.offering_id +
                                        "' must receive data but declares no endpoints");
          const std::string& uri = od_b->endpoints.front().uri;
          for (const std::string& p : out_ports)
            out[a.offering_id].outputs[p][uri] = in_port;
          auto& sources = out[b.offering_id].inputs[a.offering_id];
          if (std::find(sources.begin(), sources.end(), in_port) == sources.end()) {
            sources.push_back(in_port);
            std::sort(sources.begin(), sources.end());
          }
        }
      }
    }
    return out;
  }

  // Descriptors currently in force for one offering (what the last pushes
  // established), keyed by RRC id. Engines use this to resync.
  std::map<std::string, InteractionDescriptor> current_indes(
      const std::string& offering_id) const {
    std::lock_guard lock(mutex_);
    std::map<std::string, InteractionDescriptor> out;
    for (const auto& [rrc_id, per_offering] : pushed_) {
      auto hit = per_offering.find(offering_id);
      if (hit != per_offering.end()) out[rrc_id] = hit->second;
    }
    return out;
  }

  json snapshot() const {
    std::lock_guard lock(mutex_);
    return registry_.snapshot();
  }

  // Replaces registry contents and rebuilds the descriptor cache for every
  // active RRC without pushing anything.
  void restore(const json& doc) {
    std::lock_guard lock(mutex_);
    registry_ = Registry::restore(doc);
    pushed_.clear();
    for (const Rrc& rrc : registry_.rrcs())
      if (rrc.active) pushed_[rrc.id] = generate_indes(rrc, registry_, *graph_);
  }

 private:
  struct PushTask {
    std::string offering_id;
    std::string engine_base;
    InteractionDescriptor indes;
  };

  const Ingredient* ingredient_of(const Rrc& rrc, const Irc& irc) const {
    const Recipe* recipe = registry_.find_recipe(rrc.recipe_id);
    return recipe ? recipe->find_ingredient(irc.ingredient_id) : nullptr;
  }

  // Smallest-registration pool offering admissible for the IRC right now.
  const OfferingDescription* scan_pool(const Rrc& rrc, const Irc& irc) const {
    if (irc.at_capacity()) return nullptr;
    const Ingredient* ing = ingredient_of(rrc, irc);
    if (!ing) return nullptr;
    for (const OfferingDescription* od : registry_.offerings_by_registration()) {
      if (irc.has_member(od->local_id)) continue;
      if (matches(*od, *ing, *graph_) && evaluate(irc.osr, *od)) return od;
    }
    return nullptr;
  }

  void refresh_affected(const std::set<std::string>& rrc_ids,
                        std::vector<std::string>* activated,
                        std::vector<std::string>* deactivated,
                        std::vector<PushTask>& pushes) {
    for (Rrc& rrc : registry_.rrcs()) {
      if (!rrc_ids.count(rrc.id)) continue;
      bool was = rrc.active;
      bool now = registry_.recompute_active(rrc);
      if (activated && now && !was) activated->push_back(rrc.id);
      refresh_rrc(rrc, pushes);
      if (deactivated && !now && was) deactivated->push_back(rrc.id);
    }
  }

  // Diffs the RRC's intended descriptors against what was last pushed and
  // plans pushes for the changes. Members that left but are still
  // registered receive an empty (detaching) descriptor; a deactivated RRC
  // tears down to empty descriptors for all remaining members.
  void refresh_rrc(Rrc& rrc, std::vector<PushTask>& pushes) {
    auto& cache = pushed_[rrc.id];
    if (rrc.active) {
      auto intended = generate_indes(rrc, registry_, *graph_);
      for (auto it = cache.begin(); it != cache.end();) {
        if (!intended.count(it->first)) {
          if (const OfferingDescription* od = registry_.find_offering(it->first))
            pushes.push_back({od->local_id, od->engine_base(),
                              InteractionDescriptor{od->local_id, rrc.id, {}, {}}});
          it = cache.erase(it);
        } else {
          ++it;
        }
      }
      for (auto& [offering_id, indes] : intended) {
        auto hit = cache.find(offering_id);
        if (hit != cache.end() && hit->second == indes) continue;
        cache[offering_id] = indes;
        const OfferingDescription* od = registry_.find_offering(offering_id);
        pushes.push_back({offering_id, od ? od->engine_base() : std::string(), indes});
      }
    } else {
      for (const auto& [offering_id, last] : cache)
        if (const OfferingDescription* od = registry_.find_offering(offering_id))
          pushes.push_back({od->local_id, od->engine_base(),
                            InteractionDescriptor{od->local_id, rrc.id, {}, {}}});
      pushed_.erase(rrc.id);
    }
  }

  void execute(const std::vector<PushTask>& pushes,
               std::vector<std::string>& pushed_to,
               std::vector<std::string>& failures) {
    for (const PushTask& task : pushes) {
      bool delivered = false;
      int backoff = options_.push_backoff_ms;
      for (int attempt = 0; attempt < std::max(1, options_.push_attempts);
           ++attempt) {
        if (attempt > 0 && backoff > 0) {
          std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
          backoff *= 2;
        }
        if (transport_.push_indes(task.offering_id, task.engine_base, task.indes)) {
          delivered = true;
          break;
        }
      }
      if (delivered)
        pushed_to.push_back(task.offering_id);
      else
        failures.push_back(task.offering_id);
    }
  }

  mutable std::mutex mutex_;
  std::shared_ptr<const TypeGraph> graph_;
  IndesTransport& transport_;
  ControllerOptions options_;
  Registry registry_;
  // rrc id -> offering id -> descriptor in force after the last refresh.
  std::map<std::string, std::map<std::string, InteractionDescriptor>> pushed_;
};

}  // namespace choreo
