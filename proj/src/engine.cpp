#include "aracne/sim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <map>

#include "aracne/util.hpp"

namespace aracne::sim {

SimSession::SimSession(std::shared_ptr<const Scenario> scenario)
    : scenario_(std::move(scenario)), cwd_(scenario_->home) {}

std::string SimSession::resolve(const std::string& path) const {
  std::string combined;
  if (!path.empty() && path.front() == '/') {
    combined = path;
  } else if (path == "~" || util::starts_with(path, "~/")) {
    combined = scenario_->home + path.substr(1);
  } else {
    combined = cwd_ + "/" + path;
  }
  std::vector<std::string> parts;
  for (const auto& part : util::split(combined, '/')) {
    if (part.empty() || part == ".") continue;
    if (part == "..") {
      if (!parts.empty()) parts.pop_back();
      continue;
    }
    parts.push_back(part);
  }
  std::string out = "/";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += "/";
    out += parts[i];
  }
  return out;
}

const FsNode* SimSession::node(const std::string& abs_path) const {
  static const FsNode root{"", true, 0755, false};
  if (abs_path == "/") return &root;
  auto it = scenario_->fs.find(abs_path);
  return it == scenario_->fs.end() ? nullptr : &it->second;
}

std::vector<std::string> SimSession::children(const std::string& abs_path) const {
  std::string prefix = abs_path == "/" ? "/" : abs_path + "/";
  std::vector<std::string> names;
  for (const auto& [path, fs_node] : scenario_->fs) {
    if (!util::starts_with(path, prefix)) continue;
    std::string rest = path.substr(prefix.size());
    if (rest.empty() || rest.find('/') != std::string::npos) continue;
    names.push_back(rest);
  }
  std::sort(names.begin(), names.end());
  return names;
}

namespace {

bool is_hidden(const std::string& name, const FsNode& fs_node) {
  return fs_node.hidden || (!name.empty() && name.front() == '.');
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out += "\n";
    out += lines[i];
  }
  return out;
}

}  // namespace

std::string SimSession::cmd_echo(const std::vector<std::string>& words) {
  std::vector<std::string> args(words.begin() + 1, words.end());
  std::string out;
  for (size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += " ";
    out += args[i];
  }
  return out;
}

std::string SimSession::cmd_ls(const std::vector<std::string>& words) {
  bool all = false;
  std::string target;
  for (size_t i = 1; i < words.size(); ++i) {
    const std::string& word = words[i];
    if (!word.empty() && word.front() == '-') {
      if (word.find('a') != std::string::npos) all = true;
      continue;
    }
    target = word;
  }
  std::string abs = resolve(target.empty() ? "." : target);
  const FsNode* fs_node = node(abs);
  if (fs_node == nullptr) {
    return "ls: cannot access '" + (target.empty() ? "." : target) +
           "': No such file or directory";
  }
  if (!fs_node->is_dir) return target;
  std::vector<std::string> out;
  if (all) {
    out.push_back(".");
    out.push_back("..");
  }
  for (const auto& name : children(abs)) {
    const FsNode* child = node(abs == "/" ? "/" + name : abs + "/" + name);
    if (!all && child != nullptr && is_hidden(name, *child)) continue;
    out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return join_lines(out);
}

std::string SimSession::cmd_cat(const std::vector<std::string>& words) {
  if (words.size() < 2) return "";
  std::vector<std::string> pieces;
  for (size_t i = 1; i < words.size(); ++i) {
    if (!words[i].empty() && words[i].front() == '-') continue;
    std::string abs = resolve(words[i]);
    const FsNode* fs_node = node(abs);
    if (fs_node == nullptr) {
      pieces.push_back("cat: " + words[i] + ": No such file or directory");
    } else if (fs_node->is_dir) {
      pieces.push_back("cat: " + words[i] + ": Is a directory");
    } else {
      pieces.push_back(fs_node->content);
    }
  }
  return join_lines(pieces);
}

std::string SimSession::cmd_cd(const std::vector<std::string>& words) {
  std::string target = words.size() > 1 ? words[1] : "~";
  std::string abs = resolve(target);
  const FsNode* fs_node = node(abs);
  if (fs_node == nullptr) return "bash: cd: " + target + ": No such file or directory";
  if (!fs_node->is_dir) return "bash: cd: " + target + ": Not a directory";
  cwd_ = abs;
  return "";
}

std::string SimSession::cmd_find(const std::vector<std::string>& words) {
  std::string start = ".";
  std::string name_glob;
  char type = 0;
  std::vector<std::string> positional;
  for (size_t i = 1; i < words.size(); ++i) {
    const std::string& word = words[i];
    if (word == "-name" && i + 1 < words.size()) {
      name_glob = words[++i];
    } else if (word == "-type" && i + 1 < words.size()) {
      ++i;
      type = words[i].empty() ? 0 : words[i][0];
    } else if (!word.empty() && word.front() != '-') {
      positional.push_back(word);
    }
  }
  if (!positional.empty()) start = positional.front();
  std::string abs = resolve(start);
  const FsNode* start_node = node(abs);
  if (start_node == nullptr) return "find: '" + start + "': No such file or directory";

  std::vector<std::pair<std::string, const FsNode*>> matches;
  matches.emplace_back(abs, start_node);
  std::string prefix = abs == "/" ? "/" : abs + "/";
  for (const auto& [path, fs_node] : scenario_->fs) {
    if (util::starts_with(path, prefix)) matches.emplace_back(path, &fs_node);
  }

  std::vector<std::string> out;
  for (const auto& [path, fs_node] : matches) {
    if (type == 'f' && fs_node->is_dir) continue;
    if (type == 'd' && !fs_node->is_dir) continue;
    if (!name_glob.empty()) {
      std::string base = path == "/" ? "/" : path.substr(path.rfind('/') + 1);
      if (!util::glob_match(name_glob, base)) continue;
    }
    // print with the operand's own spelling as prefix
    std::string shown = path;
    if (shown == abs) {
      shown = start;
    } else if (util::starts_with(shown, prefix)) {
      std::string rel = shown.substr(prefix.size());
      shown = (start == "/") ? "/" + rel : start + "/" + rel;
    }
    out.push_back(shown);
  }
  return join_lines(out);
}

std::string SimSession::cmd_grep(const std::vector<std::string>& words) {
  std::vector<std::string> args;
  for (size_t i = 1; i < words.size(); ++i) {
    if (!words[i].empty() && words[i].front() == '-') continue;  // flags ignored
    args.push_back(words[i]);
  }
  if (args.size() < 2) return "usage: grep PATTERN FILE...";
  const std::string& needle = args[0];
  bool many = args.size() > 2;
  std::vector<std::string> out;
  for (size_t i = 1; i < args.size(); ++i) {
    std::string abs = resolve(args[i]);
    const FsNode* fs_node = node(abs);
    if (fs_node == nullptr) {
      out.push_back("grep: " + args[i] + ": No such file or directory");
      continue;
    }
    if (fs_node->is_dir) {
      out.push_back("grep: " + args[i] + ": Is a directory");
      continue;
    }
    for (const auto& line : util::split_lines(fs_node->content)) {
      if (line.find(needle) != std::string::npos) {
        out.push_back(many ? args[i] + ":" + line : line);
      }
    }
  }
  return join_lines(out);
}

std::string SimSession::cmd_base64(const std::vector<std::string>& words) {
  bool decode = false;
  std::string target;
  for (size_t i = 1; i < words.size(); ++i) {
    if (words[i] == "-d" || words[i] == "--decode") {
      decode = true;
    } else if (!words[i].empty() && words[i].front() != '-') {
      target = words[i];
    }
  }
  if (target.empty()) return "base64: missing file operand";
  std::string abs = resolve(target);
  const FsNode* fs_node = node(abs);
  if (fs_node == nullptr) return "base64: " + target + ": No such file or directory";
  if (fs_node->is_dir) return "base64: " + target + ": Is a directory";
  return decode ? util::base64_decode(fs_node->content) : util::base64_encode(fs_node->content);
}

std::string SimSession::cmd_head_tail(const std::vector<std::string>& words, bool head) {
  const char* name = head ? "head" : "tail";
  size_t count = 10;
  std::string target;
  for (size_t i = 1; i < words.size(); ++i) {
    if (words[i] == "-n" && i + 1 < words.size()) {
      count = static_cast<size_t>(std::max(0L, std::strtol(words[++i].c_str(), nullptr, 10)));
    } else if (!words[i].empty() && words[i].front() != '-') {
      target = words[i];
    }
  }
  if (target.empty()) return std::string(name) + ": missing file operand";
  std::string abs = resolve(target);
  const FsNode* fs_node = node(abs);
  if (fs_node == nullptr) {
    return std::string(name) + ": cannot open '" + target + "' for reading: No such file or directory";
  }
  if (fs_node->is_dir) return std::string(name) + ": error reading '" + target + "': Is a directory";
  auto lines = util::split_lines(fs_node->content);
  std::vector<std::string> out;
  if (head) {
    for (size_t i = 0; i < lines.size() && i < count; ++i) out.push_back(lines[i]);
  } else {
    size_t start = lines.size() > count ? lines.size() - count : 0;
    for (size_t i = start; i < lines.size(); ++i) out.push_back(lines[i]);
  }
  return join_lines(out);
}

std::string SimSession::run_segment(const std::string& segment) {
  std::string line = util::trim(segment);
  if (line.empty()) return "";

  // Anything with shell plumbing the engine does not model goes straight to
  // the scenario handlers.
  bool plain = line.find_first_of("|<>;") == std::string::npos;
  std::vector<std::string> words = util::shell_words(line);
  if (plain && !words.empty()) {
    const std::string& cmd = words[0];
    if (cmd == "echo") return cmd_echo(words);
    if (cmd == "ls") return cmd_ls(words);
    if (cmd == "cat") return cmd_cat(words);
    if (cmd == "cd") return cmd_cd(words);
    if (cmd == "pwd") return cwd_;
    if (cmd == "find") return cmd_find(words);
    if (cmd == "whoami") return scenario_->username();
    if (cmd == "id") {
      std::string user = scenario_->username();
      return "uid=1000(" + user + ") gid=1000(" + user + ") groups=1000(" + user + ")";
    }
    if (cmd == "grep") return cmd_grep(words);
    if (cmd == "base64") return cmd_base64(words);
    if (cmd == "head") return cmd_head_tail(words, true);
    if (cmd == "tail") return cmd_head_tail(words, false);
  }
  for (const auto& handler : scenario_->handlers) {
    if (util::glob_match(handler.pattern, line)) return handler.response;
  }
  return "command not found: " + (words.empty() ? line : words[0]);
}

std::string SimSession::handle_command(const std::string& line) {
  if (hung_) return "";
  std::vector<std::string> outputs;
  size_t start = 0;
  std::string text = line;
  while (true) {
    size_t amp = text.find("&&", start);
    std::string segment =
        amp == std::string::npos ? text.substr(start) : text.substr(start, amp - start);
    std::string trimmed = util::trim(segment);
    if (!trimmed.empty()) {
      for (const auto& pattern : scenario_->blocking_commands) {
        if (util::glob_match(pattern, trimmed)) {
          // emit the handler response (the interactive question) then hang
          std::string question;
          for (const auto& handler : scenario_->handlers) {
            if (util::glob_match(handler.pattern, trimmed)) {
              question = handler.response;
              break;
            }
          }
          hung_ = true;
          if (!question.empty()) outputs.push_back(question);
          return join_lines(outputs);
        }
      }
      std::string out = run_segment(trimmed);
      if (!out.empty()) outputs.push_back(out);
    }
    if (amp == std::string::npos) break;
    start = amp + 2;
  }
  return join_lines(outputs);
}

// --- wire framing ---

std::string wire_greeting(const Scenario& scenario) {
  std::string out;
  if (!scenario.banner.empty()) {
    for (const auto& line : util::split_lines(scenario.banner)) out += line + "\r\n";
  }
  out += scenario.prompt;
  return out;
}

std::string wire_response(const std::string& echoed_line, const std::string& output,
                          const std::string& prompt, bool hung) {
  std::string out = echoed_line + "\r\n";
  if (!output.empty()) {
    for (const auto& line : util::split_lines(output)) out += line + "\r\n";
  }
  if (!hung) out += prompt;
  return out;
}

// --- in-process channel ---

namespace {

class InProcessChannel : public shell::ByteChannel {
 public:
  explicit InProcessChannel(std::shared_ptr<const Scenario> scenario)
      : session_(std::move(scenario)) {
    buffer_ = wire_greeting(session_.scenario());
  }

  void send_bytes(std::string_view data) override {
    std::lock_guard lock(mutex_);
    if (closed_) throw SessionClosedError("channel is closed");
    pending_ += data;
    size_t nl;
    while ((nl = pending_.find('\n')) != std::string::npos) {
      std::string line = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (session_.hung()) continue;  // blocked awaiting input: no bytes back
      std::string output = session_.handle_command(line);
      buffer_ += wire_response(line, output, session_.scenario().prompt, session_.hung());
    }
    ready_.notify_all();
  }

  std::string recv_some(std::chrono::milliseconds deadline) override {
    std::unique_lock lock(mutex_);
    if (buffer_.empty() && !closed_) {
      ready_.wait_for(lock, deadline, [this] { return !buffer_.empty() || closed_; });
    }
    std::string out = std::move(buffer_);
    buffer_.clear();
    return out;
  }

  bool closed() const override {
    std::lock_guard lock(mutex_);
    return closed_;
  }

  void close() override {
    std::lock_guard lock(mutex_);
    closed_ = true;
    ready_.notify_all();
  }

 private:
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  SimSession session_;
  std::string pending_;
  std::string buffer_;
  bool closed_ = false;
};

std::mutex registry_mutex;
std::map<std::string, std::shared_ptr<SimServer>>& registry() {
  static std::map<std::string, std::shared_ptr<SimServer>> instance;
  return instance;
}
std::atomic<int> registry_counter{0};

}  // namespace

std::unique_ptr<shell::ByteChannel> SimServer::open_channel() {
  return std::make_unique<InProcessChannel>(scenario_);
}

shell::Endpoint serve_in_process(std::shared_ptr<SimServer> server) {
  std::string key = server->scenario().name + "#" + std::to_string(registry_counter++);
  {
    std::lock_guard lock(registry_mutex);
    registry()[key] = server;
  }
  shell::Endpoint endpoint;
  endpoint.transport = shell::Transport::InProcess;
  endpoint.host = key;
  endpoint.port = 0;
  endpoint.username = server->scenario().username();
  if (server->scenario().auth) endpoint.password = server->scenario().auth->password;
  return endpoint;
}

std::shared_ptr<SimServer> find_in_process(const std::string& name) {
  std::lock_guard lock(registry_mutex);
  auto it = registry().find(name);
  return it == registry().end() ? nullptr : it->second;
}

}  // namespace aracne::sim
