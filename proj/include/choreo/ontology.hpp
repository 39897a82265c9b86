#pragma once

// Class hierarchy for offering categories and port value types. Subclass
// queries are answered against the reflexive-transitive closure of the
// declared subClassOf edges, precomputed once at load time.

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "choreo/core.hpp"

namespace choreo {

using Uri = std::string;

class TypeGraph {
 public:
  TypeGraph() = default;

  void add_class(const Uri& cls) {
    if (cls.empty()) fail(ErrorKind::Parse, "type graph: empty class URI");
    classes_.insert(cls);
  }

  // Declares sub ⊑ super. Both endpoints become classes. A self-edge is a
  // no-op: reflexivity already holds for every URI.
  void add_edge(const Uri& sub, const Uri& super) {
    add_class(sub);
    add_class(super);
    if (sub != super) supers_[sub].insert(super);
  }

  // Recomputes the closure. Throws Error{Cycle} naming one class on a cycle
  // of distinct classes.
  void finalize() {
    reach_.clear();
    std::map<Uri, int> color;  // 0 white, 1 gray, 2 black
    std::vector<Uri> postorder;
    for (const Uri& c : classes_) visit(c, color, postorder);
    // postorder lists every class after all of its superclasses, so one pass
    // suffices for the longest-path closure.
    for (const Uri& u : postorder) {
      auto& row = reach_[u];
      row[u] = 0;
      auto it = supers_.find(u);
      if (it == supers_.end()) continue;
      for (const Uri& s : it->second) {
        for (const auto& [target, dist] : reach_[s]) {
          auto [slot, inserted] = row.try_emplace(target, dist + 1);
          if (!inserted && slot->second < dist + 1) slot->second = dist + 1;
        }
      }
    }
  }

  // True iff b is reachable from a through zero or more subclass edges.
  // URIs absent from the graph behave as isolated classes.
  bool is_subclass_of(const Uri& a, const Uri& b) const {
    return subclass_distance(a, b).has_value();
  }

  // Longest edge-path from a up to b; 0 when a == b, nullopt when !(a ⊑ b).
  std::optional<int> subclass_distance(const Uri& a, const Uri& b) const {
    if (a == b) return 0;
    auto row = reach_.find(a);
    if (row == reach_.end()) return std::nullopt;
    auto hit = row->second.find(b);
    if (hit == row->second.end()) return std::nullopt;
    return hit->second;
  }

  std::size_t class_count() const { return classes_.size(); }
  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& [sub, sups] : supers_) n += sups.size();
    return n;
  }
  const std::set<Uri>& classes() const { return classes_; }
  const std::map<Uri, std::set<Uri>>& edges() const { return supers_; }

 private:
  void visit(const Uri& node, std::map<Uri, int>& color,
             std::vector<Uri>& postorder) const {
    int& c = color[node];
    if (c == 2) return;
    if (c == 1)
      fail(ErrorKind::Cycle, "type graph: subclass cycle through '" + node + "'");
    c = 1;
    auto it = supers_.find(node);
    if (it != supers_.end())
      for (const Uri& s : it->second) visit(s, color, postorder);
    c = 2;
    postorder.push_back(node);
  }

  std::set<Uri> classes_;
  std::map<Uri, std::set<Uri>> supers_;
  std::map<Uri, std::map<Uri, int>> reach_;
};

namespace detail {

// `<http://...>` sheds its brackets; `prefix:rest` expands through the
// prefix table when the prefix is declared, and stays opaque otherwise.
inline Uri resolve_uri(const std::string& token,
                       const std::map<std::string, std::string>& prefixes,
                       int line_no) {
  std::string t = token;
  if (t.size() >= 2 && t.front() == '<' && t.back() == '>')
    t = t.substr(1, t.size() - 2);
  if (t.empty())
    fail(ErrorKind::Parse,
         "ontology line " + std::to_string(line_no) + ": empty URI");
  std::size_t colon = t.find(':');
  if (colon != std::string::npos) {
    auto hit = prefixes.find(t.substr(0, colon));
    if (hit != prefixes.end()) return hit->second + t.substr(colon + 1);
  }
  return t;
}

}  // namespace detail

// Line-oriented ontology documents: one `<sub> subClassOf <super>` per line,
// `#` comments, blank lines, and `@prefix p: <uri>` declarations.
inline TypeGraph load_type_graph(const std::string& document) {
  TypeGraph graph;
  std::map<std::string, std::string> prefixes;
  std::istringstream in(document);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (fields >> tok) tokens.push_back(tok);

    if (tokens[0] == "@prefix") {
      // @prefix ex: <http://example.org/>
      if (tokens.size() != 3 || tokens[1].empty() || tokens[1].back() != ':')
        fail(ErrorKind::Parse, "ontology line " + std::to_string(line_no) +
                                   ": malformed @prefix declaration");
      std::string name = tokens[1].substr(0, tokens[1].size() - 1);
      std::string target = tokens[2];
      if (target.size() >= 2 && target.front() == '<' && target.back() == '>')
        target = target.substr(1, target.size() - 2);
      prefixes[name] = target;
      continue;
    }
    if (tokens.size() != 3 || tokens[1] != "subClassOf")
      fail(ErrorKind::Parse, "ontology line " + std::to_string(line_no) +
                                 ": expected '<sub> subClassOf <super>'");
    graph.add_edge(detail::resolve_uri(tokens[0], prefixes, line_no),
                   detail::resolve_uri(tokens[2], prefixes, line_no));
  }
  graph.finalize();
  return graph;
}

inline TypeGraph load_type_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::NotFound, "ontology file not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_type_graph(buf.str());
}

}  // namespace choreo
