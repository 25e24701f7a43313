/*
 * Copyright 2026 The WAT Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "wat/embed_server.hpp"

#include <httplib.h>
#include <json.hpp>

#include "wat/error.hpp"

namespace wat {

using nlohmann::json;

struct EmbedServer::Impl {
  std::shared_ptr<EmbeddingProvider> provider;
  httplib::Server server;
  std::thread thread;
  std::string host = "127.0.0.1";
  int port = 0;
};

EmbedServer::EmbedServer(std::shared_ptr<EmbeddingProvider> provider)
    : impl_(std::make_unique<Impl>()) {
  impl_->provider = std::move(provider);
  // Exclusive bind: a port held by another process must fail.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes),
               sizeof(yes));
  });
  auto* impl = impl_.get();
  impl_->server.Post("/embed", [impl](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error&) {
      res.status = 400;
      res.set_content(R"({"error":"body is not JSON"})", "application/json");
      return;
    }
    if (!body.is_object() || !body.contains("texts") || !body["texts"].is_array()) {
      res.status = 400;
      res.set_content(R"({"error":"expected {\"texts\": [string, ...]}"})",
                      "application/json");
      return;
    }
    std::vector<std::string> texts;
    for (const auto& t : body["texts"]) {
      if (!t.is_string()) {
        res.status = 400;
        res.set_content(R"({"error":"texts must be strings"})", "application/json");
        return;
      }
      texts.push_back(t.get<std::string>());
    }
    json out;
    out["dim"] = impl->provider->dim();
    out["embeddings"] = json::array();
    try {
      for (auto& v : impl->provider->embed_batch(texts)) {
        out["embeddings"].push_back(std::move(v.values));
      }
    } catch (const Error& e) {
      res.status = 500;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
      return;
    }
    res.status = 200;
    res.set_content(out.dump(), "application/json");
  });
}

EmbedServer::~EmbedServer() { stop(); }

int EmbedServer::start(const std::string& host, int port) {
  impl_->host = host;
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
  } else {
    impl_->port = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (impl_->port < 0) {
    throw Error("cannot bind embedding server to " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void EmbedServer::run(const std::string& host, int port) {
  impl_->host = host;
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error("cannot bind embedding server to " + host + ":" + std::to_string(port));
  }
  impl_->port = port;
  impl_->server.listen_after_bind();
}

void EmbedServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string EmbedServer::endpoint() const {
  return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

}  // namespace wat
