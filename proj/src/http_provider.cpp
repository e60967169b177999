#include "aracne/llm/http_provider.hpp"

#include <cctype>
#include <cstdlib>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "aracne/errors.hpp"

namespace aracne::llm {

using nlohmann::json;

std::string default_key_env(const std::string& provider_name) {
  std::string out = "ARACNE_PROVIDER_";
  for (char c : provider_name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    } else {
      out.push_back('_');
    }
  }
  out += "_KEY";
  return out;
}

HttpChatProvider::HttpChatProvider(HttpProviderConfig config) : config_(std::move(config)) {
  if (config_.key_env.empty()) config_.key_env = default_key_env(config_.name);
}

std::string HttpChatProvider::build_request_body(const std::string& model, const std::string& prompt) {
  json body = {
      {"model", model},
      {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
  };
  return body.dump();
}

std::string HttpChatProvider::extract_text(const std::string& response_body) {
  json body;
  try {
    body = json::parse(response_body);
  } catch (const json::exception& e) {
    throw ProviderError("provider returned unparseable body: " + std::string(e.what()));
  }
  if (body.contains("error")) {
    throw ProviderError("provider error: " + body["error"].dump());
  }
  if (!body.contains("choices") || !body["choices"].is_array() || body["choices"].empty()) {
    throw ProviderError("provider response has no choices");
  }
  const json& message = body["choices"][0].value("message", json::object());
  if (!message.contains("content") || !message["content"].is_string()) {
    throw ProviderError("provider response has no message content");
  }
  return message["content"].get<std::string>();
}

ProviderResponse HttpChatProvider::complete(const std::string& model, const std::string& prompt,
                                            const AgentConfig& config) {
  const char* key = std::getenv(config_.key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw TransportError("missing provider credential, set " + config_.key_env);
  }

  httplib::Client client(config_.base_url);
  client.set_connection_timeout(std::chrono::milliseconds(config.connect_timeout_ms));
  client.set_read_timeout(std::chrono::milliseconds(config.provider_timeout_ms));
  client.set_bearer_token_auth(key);

  auto result = client.Post(config_.path, build_request_body(model, prompt), "application/json");
  if (!result) {
    throw TransportError("provider '" + config_.name + "' transport error: " +
                         httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw TransportError("provider '" + config_.name + "' HTTP " + std::to_string(result->status) +
                         ": " + result->body.substr(0, 200));
  }
  ProviderResponse response;
  response.text = extract_text(result->body);
  return response;
}

}  // namespace aracne::llm
