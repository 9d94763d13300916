#pragma once

#include <string>

namespace gridplan::net {

/// "http://host:port/base" split into the origin httplib connects to and the
/// path prefix requests are issued under.
struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // "" or "/base" without trailing slash

  static Url parse(const std::string& text);

  std::string join(const std::string& route) const { return path + route; }
};

}  // namespace gridplan::net
