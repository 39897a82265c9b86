#pragma once

// Subclass-based matchmaking between offerings and ingredients.
//
// An offering o can replace an ingredient i iff
//   (1) category(o) ⊑ category(i),
//   (2) every input of o has an ingredient input whose type is the same or a
//       subclass of the offering input's type, and
//   (3) every output of o has an ingredient output whose type is the same or
//       a superclass of the offering output's type.
// Offerings may declare fewer inputs than the ingredient; ingredient ports
// left unmatched stay unwired.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "choreo/ontology.hpp"
#include "choreo/registry.hpp"

namespace choreo {

inline bool matches(const OfferingDescription& o, const Ingredient& i,
                    const TypeGraph& g) {
  if (!g.is_subclass_of(o.category, i.category)) return false;
  for (const DataField& in_o : o.input_data) {
    bool witnessed = false;
    for (const DataField& in_i : i.inputs)
      if (g.is_subclass_of(in_i.value_type, in_o.value_type)) {
        witnessed = true;
        break;
      }
    if (!witnessed) return false;
  }
  for (const DataField& out_o : o.output_data) {
    bool witnessed = false;
    for (const DataField& out_i : i.outputs)
      if (g.is_subclass_of(out_o.value_type, out_i.value_type)) {
        witnessed = true;
        break;
      }
    if (!witnessed) return false;
  }
  return true;
}

namespace detail {

// Greedy deterministic assignment, offering ports in lexicographic order.
// Preference per port: an unbound witness over an already-bound one, the
// deepest witness (longest edge-path for inputs, shortest for outputs,
// i.e. the most specific type either way), then the lexicographically
// smallest ingredient port name. Offering ports share an ingredient port
// only when no unbound witness remains.
inline std::map<std::string, std::string> bind_direction(
    std::vector<const DataField*> offering_ports,
    const std::vector<DataField>& ingredient_ports, const TypeGraph& g,
    bool offering_side_is_sub) {
  std::sort(offering_ports.begin(), offering_ports.end(),
            [](const DataField* a, const DataField* b) { return a->name < b->name; });
  std::map<std::string, std::string> bound;  // offering port -> ingredient port
  std::set<std::string> used;
  for (const DataField* op : offering_ports) {
    const DataField* best = nullptr;
    int best_depth = 0;
    bool best_unbound = false;
    for (const DataField& ip : ingredient_ports) {
      auto dist = offering_side_is_sub
                      ? g.subclass_distance(op->value_type, ip.value_type)
                      : g.subclass_distance(ip.value_type, op->value_type);
      if (!dist) continue;
      // Depth of the witness relative to the offering port type: for inputs
      // the witness sits below, for outputs above, so "more specific" means
      // a longer path below and a shorter path above.
      int depth = offering_side_is_sub ? -*dist : *dist;
      bool unbound = !used.count(ip.name);
      bool better;
      if (!best)
        better = true;
      else if (unbound != best_unbound)
        better = unbound;
      else if (depth != best_depth)
        better = depth > best_depth;
      else
        better = ip.name < best->name;
      if (better) {
        best = &ip;
        best_depth = depth;
        best_unbound = unbound;
      }
    }
    if (!best)
      fail(ErrorKind::Invariant,
           "bind_ports: offering port '" + op->name + "' has no witness");
    bound[op->name] = best->name;
    used.insert(best->name);
  }
  return bound;
}

}  // namespace detail

// Deterministic port binding for an admitted offering. Pre: matches(o, i, g).
inline PortBinding bind_ports(const OfferingDescription& o, const Ingredient& i,
                              const TypeGraph& g) {
  std::vector<const DataField*> ins, outs;
  for (const DataField& f : o.input_data) ins.push_back(&f);
  for (const DataField& f : o.output_data) outs.push_back(&f);
  PortBinding binding;
  binding.input_map = detail::bind_direction(std::move(ins), i.inputs, g, false);
  binding.output_map = detail::bind_direction(std::move(outs), i.outputs, g, true);
  return binding;
}

// Every IRC that would admit the offering right now: the ingredient matches,
// the IRC's selection rule holds, and the IRC is below its maximum
// cardinality. Order: RRC creation order, then ingredient order.
inline std::vector<JoinedIrc> find_matching_ircs(const OfferingDescription& o,
                                                 const Registry& reg,
                                                 const TypeGraph& g) {
  std::vector<JoinedIrc> out;
  for (const Rrc& rrc : reg.rrcs()) {
    const Recipe* recipe = reg.find_recipe(rrc.recipe_id);
    if (!recipe) continue;
    for (const Irc& irc : rrc.ircs) {
      const Ingredient* ing = recipe->find_ingredient(irc.ingredient_id);
      if (!ing) continue;
      if (irc.at_capacity()) continue;
      if (!matches(o, *ing, g)) continue;
      if (!evaluate(irc.osr, o)) continue;
      out.push_back({rrc.id, irc.id});
    }
  }
  return out;
}

}  // namespace choreo
