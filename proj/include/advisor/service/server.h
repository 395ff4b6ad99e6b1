#pragma once

#include <memory>
#include <string>

#include "advisor/service/advisor.h"

namespace httplib {
class Server;
}

namespace advisor::service {

// HTTP front end. Routes and payloads are described in docs/api/v1.md.
class AdvisorServer {
 public:
  explicit AdvisorServer(Advisor& advisor);
  ~AdvisorServer();

  // Blocks until stop().
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it; follow with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  bool is_running() const;

 private:
  Advisor& advisor_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace advisor::service
