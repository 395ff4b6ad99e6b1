#include "advisor/common/endpoint.h"

#include "advisor/common/errors.h"

namespace advisor {

Endpoint split_endpoint(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme) {
    throw ConfigError("endpoint must be an http:// URL: " + std::string(url));
  }
  const auto slash = url.find('/', kScheme.size());
  Endpoint e;
  e.origin = std::string(url.substr(0, slash));
  e.path = slash == std::string_view::npos ? "/" : std::string(url.substr(slash));
  if (e.origin.size() == kScheme.size()) throw ConfigError("endpoint has no host: " + std::string(url));
  return e;
}

}  // namespace advisor
