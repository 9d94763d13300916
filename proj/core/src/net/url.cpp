#include "gridplan/net/url.hpp"

#include "gridplan/error.hpp"

namespace gridplan::net {

Url Url::parse(const std::string& text) {
  const auto scheme_end = text.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kConfigError, "URL without scheme: " + text);
  }
  const auto scheme = text.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::kConfigError, "unsupported URL scheme: " + text);
  }
  const auto host_begin = scheme_end + 3;
  const auto path_begin = text.find('/', host_begin);
  Url url;
  if (path_begin == std::string::npos) {
    url.origin = text;
  } else {
    url.origin = text.substr(0, path_begin);
    url.path = text.substr(path_begin);
    while (!url.path.empty() && url.path.back() == '/') url.path.pop_back();
  }
  if (url.origin.size() == host_begin) {
    throw Error(ErrorCode::kConfigError, "URL without host: " + text);
  }
  return url;
}

}  // namespace gridplan::net
