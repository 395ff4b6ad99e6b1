#pragma once

#include <string>
#include <string_view>

namespace advisor {

// "http://host:8000/v1/chat" -> origin "http://host:8000", path "/v1/chat".
struct Endpoint {
  std::string origin;
  std::string path;
};

// Throws ConfigError for anything other than an http:// URL with a host.
Endpoint split_endpoint(std::string_view url);

}  // namespace advisor
