#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace choreo {

using json = nlohmann::json;

enum class ErrorKind {
  Parse,        // malformed document or expression text
  Cycle,        // subclass cycle in a type graph
  NotFound,     // unknown id
  Duplicate,    // id already taken
  Invariant,    // object would violate a stored-data invariant
  Unsupported,  // recognized but unsupported (CoAP endpoint types)
  Forbidden,    // input from an undeclared source
  Config,       // inconsistent runtime configuration
  Transport,    // push or delivery failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(text.substr(start));
      return parts;
    }
    parts.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string trim(std::string_view text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return "";
  std::size_t last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

// scheme://host:port of an absolute URI, without path or query.
inline std::string uri_base(const std::string& uri) {
  std::size_t scheme_end = uri.find("://");
  if (scheme_end == std::string::npos) return uri;
  std::size_t path = uri.find('/', scheme_end + 3);
  return path == std::string::npos ? uri : uri.substr(0, path);
}

// Path-and-query suffix of an absolute URI ("/" when absent).
inline std::string uri_path(const std::string& uri) {
  std::size_t scheme_end = uri.find("://");
  if (scheme_end == std::string::npos) return uri;
  std::size_t path = uri.find('/', scheme_end + 3);
  return path == std::string::npos ? "/" : uri.substr(path);
}

inline bool is_absolute_http_uri(const std::string& uri) {
  if (!uri.starts_with("http://")) return false;
  std::string_view rest{uri};
  rest.remove_prefix(7);
  return !rest.empty() && rest.front() != '/';
}

}  // namespace choreo
