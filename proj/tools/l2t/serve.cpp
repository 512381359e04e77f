#include <httplib.h>

#include <iostream>

#include "commands.hpp"

namespace l2t::cli {

int run_server(const ServeOptions& opts) {
  ServiceOptions so;
  so.exec_config = read_config(opts.exec_config);
  if (!opts.session_dir.empty()) so.session_dir = opts.session_dir;
  if (!opts.annotations.empty()) so.annotations_file = opts.annotations;
  Service service(std::move(so));
  if (!opts.data_dir.empty()) {
    std::size_t n = service.load_tables(opts.data_dir);
    std::cerr << "loaded " << n << " tables from " << opts.data_dir << "\n";
  }

  httplib::Server server;
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    Response r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
    res.set_header("Access-Control-Allow-Origin", "*");
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.status = 204;
  });

  // Port 0 picks a free port; the bound address goes to stdout.
  int port = opts.port;
  bool bound = port == 0 ? (port = server.bind_to_any_port(opts.host)) > 0 : server.bind_to_port(opts.host, port);
  if (!bound) {
    std::cerr << "cannot bind " << opts.host << ":" << opts.port << "\n";
    return 1;
  }
  std::cout << "listening on " << opts.host << ":" << port << std::endl;
  return server.listen_after_bind() ? 0 : 1;
}

}  // namespace l2t::cli
