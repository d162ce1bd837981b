#include <httplib.h>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "tomeria/session_service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"HTTP+JSON game session server", "tomeria-server"};
  std::string listen = "127.0.0.1:8080";
  std::string store;
  std::string staticDir;
  app.add_option("--listen", listen, "host:port to bind");
  app.add_option("--store", store, "Directory for levels and sessions (default $TOMERIA_STORE or ./tomeria-store)");
  app.add_option("--static", staticDir, "Serve this directory at / (browser client)");
  CLI11_PARSE(app, argc, argv);

  if (store.empty()) {
    const char* env = std::getenv("TOMERIA_STORE");
    store = env && *env ? env : "tomeria-store";
  }
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "--listen must be host:port\n";
    return 2;
  }
  const std::string host = listen.substr(0, colon);
  const int port = std::atoi(listen.c_str() + colon + 1);

  tomeria::ServiceConfig config;
  config.store = store;
  tomeria::SessionService service(config);
  httplib::Server server;
  std::optional<std::filesystem::path> mount;
  if (!staticDir.empty()) mount = staticDir;
  tomeria::bind_routes(server, service, mount);

  std::cerr << "tomeria-server listening on " << host << ':' << port << ", store " << store << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "cannot bind " << listen << '\n';
    return 1;
  }
  return 0;
}
