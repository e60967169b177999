#include "aracne/sim/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aracne/errors.hpp"
#include "aracne/util.hpp"

namespace aracne::sim {

std::string Scenario::username() const {
  if (auth) return auth->username;
  if (!users.empty()) return users.front();
  return "user";
}

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
  throw SchemaError(origin + ":" + std::to_string(line) + ": " + message, line);
}

std::string unquote(const std::string& value, const std::string& origin, int line) {
  if (value.size() < 2 || value.front() != '"' || value.back() != '"') return value;
  std::string out;
  for (size_t i = 1; i + 1 < value.size(); ++i) {
    char c = value[i];
    if (c == '\\' && i + 2 < value.size()) {
      char next = value[++i];
      switch (next) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default: fail(origin, line, std::string("unknown escape \\") + next);
      }
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string normalize_path(const std::string& path) {
  std::vector<std::string> parts;
  for (const auto& part : util::split(path, '/')) {
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

void add_parents(Scenario& scenario, const std::string& path) {
  std::string current = path;
  while (true) {
    size_t slash = current.rfind('/');
    if (slash == std::string::npos || slash == 0) break;
    current = current.substr(0, slash);
    auto [it, inserted] = scenario.fs.try_emplace(current);
    if (inserted) {
      it->second.is_dir = true;
      it->second.mode = 0755;
    }
  }
}

struct Parser {
  std::vector<std::string> lines;
  std::string origin;
  size_t index = 0;

  int line_no() const { return static_cast<int>(index); }

  // Reads heredoc body lines until the terminator tag. Content lines are
  // joined with '\n'; no trailing newline.
  std::string heredoc(const std::string& tag) {
    std::vector<std::string> body;
    while (index < lines.size()) {
      std::string line = lines[index++];
      if (util::rtrim(line) == tag) {
        std::string out;
        for (size_t i = 0; i < body.size(); ++i) {
          if (i > 0) out += "\n";
          out += body[i];
        }
        return out;
      }
      body.push_back(line);
    }
    fail(origin, line_no(), "unterminated heredoc, expected '" + tag + "'");
  }
};

// Splits `rest` into either `= inline content` or `<<TAG`. Returns the
// content, consuming heredoc lines when needed.
std::string read_content(Parser& parser, const std::string& rest, int line) {
  std::string trimmed = util::trim(rest);
  if (util::starts_with(trimmed, "=")) {
    return unquote(util::trim(trimmed.substr(1)), parser.origin, line);
  }
  if (util::starts_with(trimmed, "<<")) {
    std::string tag = util::trim(trimmed.substr(2));
    if (tag.empty()) fail(parser.origin, line, "heredoc tag missing after <<");
    return parser.heredoc(tag);
  }
  if (trimmed.empty()) return "";
  fail(parser.origin, line, "expected '= value' or '<<TAG', got '" + trimmed + "'");
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  Scenario scenario;
  Parser parser;
  parser.lines = util::split_lines(text);
  parser.origin = origin;

  std::string section;
  int flag_line = 0;

  while (parser.index < parser.lines.size()) {
    int line_no = static_cast<int>(parser.index) + 1;
    std::string raw = parser.lines[parser.index++];
    std::string line = util::trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, line_no, "malformed section header: " + line);
      section = line.substr(1, line.size() - 2);
      if (section != "meta" && section != "auth" && section != "fs" && section != "handlers" &&
          section != "flag") {
        fail(origin, line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    if (section.empty()) fail(origin, line_no, "content before any [section]");

    if (section == "fs") {
      if (util::starts_with(line, "dir ")) {
        std::string path = normalize_path(util::trim(line.substr(4)));
        FsNode node;
        node.is_dir = true;
        node.mode = 0755;
        scenario.fs[path] = node;
        add_parents(scenario, path);
        continue;
      }
      if (util::starts_with(line, "file ")) {
        std::string rest = util::trim(line.substr(5));
        // path token ends at whitespace; attributes and content follow
        size_t space = rest.find_first_of(" \t");
        std::string path_token = (space == std::string::npos) ? rest : rest.substr(0, space);
        std::string tail = (space == std::string::npos) ? "" : util::trim(rest.substr(space));
        FsNode node;
        while (true) {
          if (util::starts_with(tail, "mode=")) {
            size_t end = tail.find_first_of(" \t");
            std::string mode_text = (end == std::string::npos) ? tail.substr(5)
                                                               : tail.substr(5, end - 5);
            node.mode = static_cast<int>(std::strtol(mode_text.c_str(), nullptr, 8));
            tail = (end == std::string::npos) ? "" : util::trim(tail.substr(end));
            continue;
          }
          if (util::starts_with(tail, "hidden") &&
              (tail.size() == 6 || tail[6] == ' ' || tail[6] == '\t')) {
            node.hidden = true;
            tail = util::trim(tail.substr(6));
            continue;
          }
          break;
        }
        node.content = read_content(parser, tail, line_no);
        std::string path = normalize_path(path_token);
        scenario.fs[path] = node;
        add_parents(scenario, path);
        continue;
      }
      fail(origin, line_no, "fs entries start with 'dir' or 'file'");
    }

    if (section == "handlers") {
      if (!util::starts_with(line, "on ")) fail(origin, line_no, "handler lines start with 'on'");
      std::string rest = util::trim(line.substr(3));
      if (rest.empty() || rest.front() != '"') {
        fail(origin, line_no, "handler pattern must be double-quoted");
      }
      size_t end_quote = rest.find('"', 1);
      if (end_quote == std::string::npos) fail(origin, line_no, "unterminated handler pattern");
      Handler handler;
      handler.pattern = rest.substr(1, end_quote - 1);
      handler.response = read_content(parser, util::trim(rest.substr(end_quote + 1)), line_no);
      scenario.handlers.push_back(std::move(handler));
      continue;
    }

    // key = value sections: meta, auth, flag
    size_t eq = line.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value': " + line);
    std::string key = util::trim(line.substr(0, eq));
    std::string value = unquote(util::trim(line.substr(eq + 1)), origin, line_no);

    if (section == "meta") {
      if (key == "name") scenario.name = value;
      else if (key == "prompt") scenario.prompt = value;
      else if (key == "banner") scenario.banner = value;
      else if (key == "home") scenario.home = normalize_path(value);
      else if (key == "user") scenario.users.push_back(value);
      else if (key == "block") scenario.blocking_commands.push_back(value);
      else fail(origin, line_no, "unknown meta key '" + key + "'");
    } else if (section == "auth") {
      if (!scenario.auth) scenario.auth = Auth{};
      if (key == "username") scenario.auth->username = value;
      else if (key == "password") scenario.auth->password = value;
      else fail(origin, line_no, "unknown auth key '" + key + "'");
    } else if (section == "flag") {
      if (!scenario.flag) scenario.flag = Flag{};
      flag_line = line_no;
      if (key == "secret") scenario.flag->secret = value;
      else if (key == "path") scenario.flag->path = normalize_path(value);
      else fail(origin, line_no, "unknown flag key '" + key + "'");
    }
  }

  if (scenario.home != "/") {
    auto it = scenario.fs.find(scenario.home);
    if (it == scenario.fs.end()) {
      FsNode node;
      node.is_dir = true;
      node.mode = 0755;
      scenario.fs[scenario.home] = node;
      add_parents(scenario, scenario.home);
    }
  }
  if (scenario.flag) {
    if (scenario.flag->path.empty()) fail(origin, flag_line, "[flag] requires a path");
    auto it = scenario.fs.find(scenario.flag->path);
    if (it == scenario.fs.end() || it->second.is_dir) {
      fail(origin, flag_line, "flag path '" + scenario.flag->path + "' does not exist in [fs]");
    }
  }
  if (scenario.name.empty()) scenario.name = origin;
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open scenario file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.filename().string());
}

}  // namespace aracne::sim
