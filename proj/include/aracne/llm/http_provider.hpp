#pragma once

#include <string>

#include "aracne/llm/gateway.hpp"

namespace aracne::llm {

struct HttpProviderConfig {
  std::string name;
  std::string base_url;
  std::string path = "/v1/chat/completions";
  std::string key_env;
};

// ARACNE_PROVIDER_<NAME>_KEY
std::string default_key_env(const std::string& provider_name);

// Generic chat-completion HTTP adapter. Any endpoint speaking the
// {"model", "messages"} request / {"choices"[0]."message"."content"} response
// shape works; vendor differences are configuration, not code.
class HttpChatProvider : public Provider {
 public:
  explicit HttpChatProvider(HttpProviderConfig config);

  ProviderResponse complete(const std::string& model, const std::string& prompt,
                            const AgentConfig& config) override;

  static std::string build_request_body(const std::string& model, const std::string& prompt);
  static std::string extract_text(const std::string& response_body);

 private:
  HttpProviderConfig config_;
};

}  // namespace aracne::llm
