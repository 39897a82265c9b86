#pragma once

// In-memory store for offerings, recipes and runtime configurations, with
// an explicit JSON snapshot for persistence. Mutations are serialized by
// the controller; reads may run concurrently.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "choreo/model.hpp"

namespace choreo {

class Registry {
 public:
  struct IrcSpec {
    OsrExpr osr = OsrExpr::always_true();
    std::uint32_t min = 0;
    std::optional<std::uint32_t> max;  // nullopt = unbounded
  };

  // --- offerings

  const OfferingDescription& put_offering(OfferingDescription od) {
    validate_offering(od);
    if (offerings_.count(od.local_id))
      fail(ErrorKind::Duplicate,
           "offering '" + od.local_id + "' is already registered");
    od.registered_at = next_seq_++;
    auto [it, ok] = offerings_.emplace(od.local_id, std::move(od));
    return it->second;
  }

  OfferingDescription remove_offering(const std::string& local_id) {
    auto it = offerings_.find(local_id);
    if (it == offerings_.end())
      fail(ErrorKind::NotFound, "unknown offering '" + local_id + "'");
    OfferingDescription od = std::move(it->second);
    offerings_.erase(it);
    return od;
  }

  const OfferingDescription* find_offering(const std::string& local_id) const {
    auto it = offerings_.find(local_id);
    return it == offerings_.end() ? nullptr : &it->second;
  }

  std::vector<const OfferingDescription*> offerings_by_registration() const {
    std::vector<const OfferingDescription*> out;
    out.reserve(offerings_.size());
    for (const auto& [id, od] : offerings_) out.push_back(&od);
    std::sort(out.begin(), out.end(),
              [](const OfferingDescription* a, const OfferingDescription* b) {
                return a->registered_at < b->registered_at;
              });
    return out;
  }

  std::vector<const OfferingDescription*> query_offerings(
      const std::function<bool(const OfferingDescription&)>& predicate) const {
    std::vector<const OfferingDescription*> out;
    for (const OfferingDescription* od : offerings_by_registration())
      if (predicate(*od)) out.push_back(od);
    return out;
  }

  std::vector<const OfferingDescription*> query_offerings(const OsrExpr& rule) const {
    return query_offerings(
        [&](const OfferingDescription& od) { return evaluate(rule, od); });
  }

  std::size_t offering_count() const { return offerings_.size(); }

  // --- recipes

  const Recipe& put_recipe(Recipe recipe, const TypeGraph& graph) {
    validate_recipe(recipe, graph);
    if (recipes_.count(recipe.id))
      fail(ErrorKind::Duplicate, "recipe '" + recipe.id + "' already exists");
    auto [it, ok] = recipes_.emplace(recipe.id, std::move(recipe));
    return it->second;
  }

  const Recipe* find_recipe(const std::string& id) const {
    auto it = recipes_.find(id);
    return it == recipes_.end() ? nullptr : &it->second;
  }

  // --- runtime configurations

  // One IRC per recipe ingredient; ingredients without a spec default to no
  // constraints (empty OSR, min 0, unbounded max). IRC ids are
  // "<rrcId>.<ingredientId>".
  Rrc& create_rrc(const std::string& recipe_id,
                  const std::map<std::string, IrcSpec>& specs,
                  std::optional<std::string> rrc_id = std::nullopt) {
    const Recipe* recipe = find_recipe(recipe_id);
    if (!recipe) fail(ErrorKind::NotFound, "unknown recipe '" + recipe_id + "'");
    for (const auto& [ing_id, spec] : specs) {
      if (!recipe->find_ingredient(ing_id))
        fail(ErrorKind::Invariant, "recipe '" + recipe_id +
                                       "' has no ingredient '" + ing_id + "'");
      if (spec.max && spec.min > *spec.max)
        fail(ErrorKind::Invariant,
             "ingredient '" + ing_id + "': min cardinality " +
                 std::to_string(spec.min) + " exceeds max " +
                 std::to_string(*spec.max));
    }
    std::string id = rrc_id ? *rrc_id : "rrc" + std::to_string(rrc_counter_);
    if (find_rrc(id)) fail(ErrorKind::Duplicate, "rrc '" + id + "' already exists");
    ++rrc_counter_;

    Rrc rrc;
    rrc.id = id;
    rrc.recipe_id = recipe_id;
    for (const Ingredient& ing : recipe->ingredients) {
      Irc irc;
      irc.id = id + "." + ing.id;
      irc.ingredient_id = ing.id;
      auto spec = specs.find(ing.id);
      if (spec != specs.end()) {
        irc.osr = spec->second.osr;
        irc.min_cardinality = spec->second.min;
        irc.max_cardinality = spec->second.max;
      }
      rrc.ircs.push_back(std::move(irc));
    }
    rrcs_.push_back(std::move(rrc));
    recompute_active(rrcs_.back());
    return rrcs_.back();
  }

  Rrc* find_rrc(const std::string& id) {
    for (Rrc& rrc : rrcs_)
      if (rrc.id == id) return &rrc;
    return nullptr;
  }
  const Rrc* find_rrc(const std::string& id) const {
    for (const Rrc& rrc : rrcs_)
      if (rrc.id == id) return &rrc;
    return nullptr;
  }

  // IRC lookup by id; optionally reports the owning RRC.
  Irc* find_irc(const std::string& irc_id, Rrc** owner = nullptr) {
    for (Rrc& rrc : rrcs_)
      if (Irc* irc = rrc.find_irc(irc_id)) {
        if (owner) *owner = &rrc;
        return irc;
      }
    return nullptr;
  }

  std::vector<Rrc>& rrcs() { return rrcs_; }
  const std::vector<Rrc>& rrcs() const { return rrcs_; }

  // --- membership mutations (driven by the controller)

  void add_member(Irc& irc, const OfferingDescription& od, PortBinding binding) {
    if (irc.at_capacity())
      fail(ErrorKind::Invariant, "irc '" + irc.id + "' is at capacity");
    if (irc.has_member(od.local_id))
      fail(ErrorKind::Invariant, "offering '" + od.local_id +
                                     "' is already a member of '" + irc.id + "'");
    // Keep members ordered by registration sequence.
    auto at = std::find_if(irc.members.begin(), irc.members.end(),
                           [&](const IrcMember& m) {
                             const OfferingDescription* other =
                                 find_offering(m.offering_id);
                             return other && other->registered_at > od.registered_at;
                           });
    irc.members.insert(at, IrcMember{od.local_id, std::move(binding)});
  }

  bool remove_member(Irc& irc, const std::string& offering_id) {
    auto it = std::find_if(irc.members.begin(), irc.members.end(),
                           [&](const IrcMember& m) {
                             return m.offering_id == offering_id;
                           });
    if (it == irc.members.end()) return false;
    irc.members.erase(it);
    return true;
  }

  bool recompute_active(Rrc& rrc) const {
    bool active = true;
    for (const Irc& irc : rrc.ircs) active = active && irc.meets_minimum();
    rrc.active = active;
    return active;
  }

  // --- persistence

  static constexpr int kFormatVersion = 1;

  json snapshot() const {
    json offerings = json::array();
    for (const OfferingDescription* od : offerings_by_registration())
      offerings.push_back(offering_to_json(*od));
    json recipes = json::array();
    for (const auto& [id, recipe] : recipes_) recipes.push_back(recipe_to_json(recipe));
    json rrcs = json::array();
    for (const Rrc& rrc : rrcs_) rrcs.push_back(rrc_to_json(rrc));
    return {{"formatVersion", kFormatVersion},
            {"nextSeq", next_seq_},
            {"rrcCounter", rrc_counter_},
            {"offerings", std::move(offerings)},
            {"recipes", std::move(recipes)},
            {"rrcs", std::move(rrcs)}};
  }

  static Registry restore(const json& doc) {
    if (!doc.is_object() || !doc.contains("formatVersion"))
      fail(ErrorKind::Parse, "snapshot: missing formatVersion");
    if (doc.at("formatVersion").get<int>() != kFormatVersion)
      fail(ErrorKind::Parse,
           "snapshot: unsupported formatVersion " + doc.at("formatVersion").dump());
    Registry reg;
    reg.next_seq_ = doc.value("nextSeq", std::uint64_t{1});
    reg.rrc_counter_ = doc.value("rrcCounter", std::uint64_t{1});
    for (const json& o : doc.value("offerings", json::array())) {
      OfferingDescription od = offering_from_json(o);
      validate_offering(od);
      reg.offerings_.emplace(od.local_id, std::move(od));
    }
    for (const json& r : doc.value("recipes", json::array())) {
      Recipe recipe = recipe_from_json(r);
      reg.recipes_.emplace(recipe.id, std::move(recipe));
    }
    for (const json& r : doc.value("rrcs", json::array()))
      reg.rrcs_.push_back(rrc_from_json(r));
    return reg;
  }

  friend bool operator==(const Registry& a, const Registry& b) {
    return a.next_seq_ == b.next_seq_ && a.rrc_counter_ == b.rrc_counter_ &&
           a.offerings_ == b.offerings_ && a.recipes_ == b.recipes_ &&
           a.rrcs_ == b.rrcs_;
  }

 private:
  std::map<std::string, OfferingDescription> offerings_;
  std::map<std::string, Recipe> recipes_;
  std::vector<Rrc> rrcs_;  // creation order
  std::uint64_t next_seq_ = 1;
  std::uint64_t rrc_counter_ = 1;
};

}  // namespace choreo
