#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aracne::sim {

struct FsNode {
  std::string content;
  bool is_dir = false;
  int mode = 0644;
  bool hidden = false;  // dotfiles are hidden implicitly
};

struct Handler {
  std::string pattern;  // glob over one command segment; file order wins
  std::string response;
};

struct Flag {
  std::string secret;
  std::string path;
};

struct Auth {
  std::string username;
  std::string password;
};

// One deterministic target level: a prompt, a virtual filesystem, canned
// handlers for non-builtin commands, optional credentials and a planted flag.
struct Scenario {
  std::string name;
  std::string prompt = "$ ";
  std::string banner;
  std::string home = "/";
  std::vector<std::string> users;
  std::map<std::string, FsNode> fs;  // normalized absolute paths; "/" implicit
  std::vector<Handler> handlers;
  std::optional<Flag> flag;
  std::optional<Auth> auth;
  std::vector<std::string> blocking_commands;

  std::string username() const;
};

// Sectioned text format: [meta], [auth], [fs], [handlers], [flag].
// Values are `key = value` (double-quoted values support newline, tab,
// quote and backslash escapes); fs entries are `dir <path>` or
// `file <path> [mode=NNN] [hidden]` with `= inline` or `<<TAG` heredoc
// content; handlers are `on "<pattern>"` with the same content forms.
Scenario parse_scenario(const std::string& text, const std::string& origin);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace aracne::sim
