#pragma once

// Live provider speaking the common JSON completions protocol:
//   POST <endpoint>  {"model", "prompt", "temperature", "top_p",
//                     "max_tokens", "stop"}
//   -> {"choices": [{"text", "finish_reason"}]}
// Split out of gateway.hpp so offline users never compile the HTTP stack.

#include <memory>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "causalprompt/error.hpp"
#include "causalprompt/gateway.hpp"

namespace causalprompt {

struct HttpProviderConfig {
  std::string endpoint;  // e.g. https://host[:port]/v1/completions
  std::string api_key;   // sent as a bearer token when non-empty
  std::string provider_id = "live";
  int timeout_seconds = 120;
};

class HttpProvider : public CompletionProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) fail(Errc::ConfigError, "http provider needs an endpoint");
    split_endpoint();
  }

  std::string id() const override { return config_.provider_id; }

  CompletionReply complete_once(const CompletionRequest& request) override {
    nlohmann::ordered_json body{
        {"model", request.model_id},
        {"prompt", request.prompt},
        {"temperature", request.params.temperature},
        {"top_p", request.params.top_p},
        {"max_tokens", request.params.max_tokens},
        {"stop", request.params.stop},
    };
    httplib::Client client(base_.c_str());
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Headers headers;
    if (!config_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + config_.api_key);

    auto res = client.Post(path_.c_str(), headers, body.dump(), "application/json");
    if (!res) throw TransientProviderError("connection to " + config_.endpoint + " failed");
    if (res->status == 429 || res->status >= 500)
      throw TransientProviderError("status " + std::to_string(res->status) + " from provider");
    if (res->status != 200)
      fail(Errc::ProviderError,
           "status " + std::to_string(res->status) + " from provider: " + res->body);

    try {
      nlohmann::json j = nlohmann::json::parse(res->body);
      const auto& choice = j.at("choices").at(0);
      CompletionReply reply;
      reply.text = choice.at("text").get<std::string>();
      reply.finish_reason = choice.value("finish_reason", "stop");
      return reply;
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::ProviderError, std::string("malformed provider response: ") + e.what());
    }
  }

 private:
  // httplib wants scheme://host:port and the path separately.
  void split_endpoint() {
    const std::string& url = config_.endpoint;
    std::size_t scheme = url.find("://");
    if (scheme == std::string::npos)
      fail(Errc::ConfigError, "endpoint must start with http:// or https://");
    std::size_t path = url.find('/', scheme + 3);
    base_ = path == std::string::npos ? url : url.substr(0, path);
    path_ = path == std::string::npos ? "/v1/completions" : url.substr(path);
  }

  HttpProviderConfig config_;
  std::string base_;
  std::string path_;
};

}  // namespace causalprompt
